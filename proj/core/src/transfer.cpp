#include "hypdim/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace hypdim {

namespace {

constexpr int kMaxIterations = 100000;

std::uint64_t word_code(const Word& w, int k, std::size_t from = 0) {
  std::uint64_t code = 0;
  for (std::size_t i = from; i < w.size(); ++i) code = code * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(w[i]);
  return code;
}

struct Csr {
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> target;
};

Csr shift_successors(const TransitionMatrix& a, const std::vector<Word>& words, int depth) {
  const int k = static_cast<int>(a.rows());
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  index.reserve(words.size() * 2);
  for (std::size_t i = 0; i < words.size(); ++i) index.emplace(word_code(words[i], k), static_cast<std::uint32_t>(i));
  Csr g;
  g.offset.reserve(words.size() + 1);
  g.offset.push_back(0);
  for (const auto& u : words) {
    const int last = u.back();
    // Code of u[1:], shifted up by one digit.
    const std::uint64_t stem = depth > 1 ? word_code(u, k, 1) * static_cast<std::uint64_t>(k) : 0;
    for (int s = 0; s < k; ++s) {
      if (a(last, s) == 0) continue;
      auto it = index.find(stem + static_cast<std::uint64_t>(s));
      if (it == index.end()) throw NumericalError("pressure_transfer", "word table is not closed under the shift");
      g.target.push_back(it->second);
    }
    g.offset.push_back(g.target.size());
  }
  return g;
}

}  // namespace

TransferResult pressure_transfer(const TransitionMatrix& a, const std::vector<Word>& words,
                                 const std::vector<double>& phi, int depth, bool want_equilibrium) {
  if (depth < 1) throw InvalidArgument("pressure_transfer: depth must be >= 1");
  if (words.empty() || words.size() != phi.size())
    throw InvalidArgument("pressure_transfer: word and potential tables differ in size");
  if (!is_irreducible(a))
    throw NumericalError("pressure_transfer", "transition structure is reducible; no unique Perron eigenvector");
  const std::size_t n = words.size();
  const Csr g = shift_successors(a, words, depth);

  const double phi_max = *std::max_element(phi.begin(), phi.end());
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(phi[i] - phi_max);

  // Right eigenvector: (M h)(u) = w(u) sum_{v in succ(u)} h(v).
  std::vector<double> h(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  double lambda = 0.0;
  double rel_change = 1.0;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    double total = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      double s = 0.0;
      for (std::size_t e = g.offset[u]; e < g.offset[u + 1]; ++e) s += h[g.target[e]];
      next[u] = w[u] * s;
      total += next[u];
    }
    if (!(total > 0.0) || !std::isfinite(total))
      throw NumericalError("pressure_transfer", "power iteration lost all mass");
    double diff = 0.0;
    double hmax = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      next[u] /= total;
      diff = std::max(diff, std::abs(next[u] - h[u]));
      hmax = std::max(hmax, next[u]);
    }
    rel_change = lambda > 0.0 ? std::abs(total - lambda) / total : 1.0;
    lambda = total;
    h.swap(next);
    if (iter > 1 && rel_change <= 1e-13 && diff <= 1e-11 * hmax) break;
  }

  TransferResult res;
  auto& est = res.estimate;
  est.value = std::log(lambda) + phi_max;
  est.n_used = depth;
  est.method = PressureMethod::transfer_operator;
  est.residual = std::max(rel_change, 1e-15);
  est.diagnostics.push_back({0, depth, 0.0, est.value, PressureMethod::transfer_operator});
  if (iter >= kMaxIterations) est.warnings.push_back("power iteration hit the iteration cap");

  auto& eq = res.equilibrium;
  eq.depth = depth;
  if (!want_equilibrium) return res;

  // Left eigenvector: (nu M)(v) = sum_{u -> v} nu(u) w(u).
  std::vector<double> nu(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < kMaxIterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      const double m = nu[u] * w[u];
      for (std::size_t e = g.offset[u]; e < g.offset[u + 1]; ++e) next[g.target[e]] += m;
    }
    double total = 0.0;
    for (double x : next) total += x;
    double diff = 0.0;
    double mx = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      next[u] /= total;
      diff = std::max(diff, std::abs(next[u] - nu[u]));
      mx = std::max(mx, next[u]);
    }
    nu.swap(next);
    if (it > 1 && diff <= 1e-13 * mx) break;
  }

  eq.words = words;
  eq.cylinder_weights.resize(n);
  double z = 0.0;
  for (std::size_t u = 0; u < n; ++u) z += nu[u] * h[u];
  for (std::size_t u = 0; u < n; ++u) eq.cylinder_weights[u] = nu[u] * h[u] / z;

  // Entropy of the Markov measure with P(u, v) = M(u, v) h(v) / (lambda h(u)).
  double entropy = 0.0;
  double integral = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    const double mu = eq.cylinder_weights[u];
    integral += mu * phi[u];
    if (mu <= 0.0) continue;
    double row = 0.0;
    for (std::size_t e = g.offset[u]; e < g.offset[u + 1]; ++e) {
      const double p = w[u] * h[g.target[e]] / (lambda * h[u]);
      if (p > 0.0) row -= p * std::log(p);
    }
    entropy += mu * row;
  }
  eq.entropy = entropy;
  eq.potential_integral = integral;
  return res;
}

TransferResult pressure_transfer(const MarkovCoding& coding, const std::function<double(const Word&)>& phi,
                                 int depth) {
  const auto words = enumerate_words(coding, depth);
  std::vector<double> values;
  values.reserve(words.size());
  for (const auto& w : words) values.push_back(phi(w));
  return pressure_transfer(coding.transition, words, values, depth);
}

double log_spectral_radius(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidArgument("log_spectral_radius: need a square array");
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(m, false).eigenvalues();
  double r = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) r = std::max(r, std::abs(ev(i)));
  if (!(r > 0.0)) throw NumericalError("log_spectral_radius", "nilpotent array has zero spectral radius");
  return std::log(r);
}

double iterate_pressure(const TransitionMatrix& a, const std::vector<Word>& words, const std::vector<double>& psi) {
  if (words.empty() || words.size() != psi.size())
    throw InvalidArgument("iterate_pressure: word and potential tables differ in size");
  const auto k = a.rows();
  const double mx = *std::max_element(psi.begin(), psi.end());
  Matrix gsum = Matrix::Zero(k, k);
  for (std::size_t i = 0; i < words.size(); ++i) gsum(words[i].front(), words[i].back()) += std::exp(psi[i] - mx);
  return log_spectral_radius(a.cast<double>() * gsum) + mx;
}

PowerPressure::PowerPressure(const CatalogEntry& entry, Bundle bundle, PotentialKind kind, int m, int base_depth)
    : m_(m) {
  if (m < 1) throw InvalidArgument("PowerPressure: m must be >= 1");
  if (!entry.coding) throw InvalidArgument(entry.system.name + ": iterate pressure needs a coding");
  const auto& c = *entry.coding;
  transition_ = c.transition;
  const auto pot = make_potential(entry.system, entry.frame, kind, bundle);
  if (entry.system.constant_jacobian) {
    mode_ = Mode::constant;
    entropy_ = m * log_spectral_radius(c.transition.cast<double>());
    constant_value_ = pot(c.reference_point, m);
    residual_ = 1e-12 * (std::abs(entropy_) + std::abs(constant_value_) + 1.0);
    return;
  }
  if (entry.frame.dim(bundle) == 1) {
    // Scalar cocycle: psi_m = S_m psi_1, so P(f^m, t psi_m) = m P(f, t psi_1).
    mode_ = Mode::additive;
    // Affine branches make psi_1 constant on 1-cylinders, so one symbol is exact.
    depth_ = entry.info.linear ? 1 : base_depth;
    words_ = enumerate_words(c, depth_, 1u << 20);
    values_.reserve(words_.size());
    for (const auto& w : words_) values_.push_back(pot(c.anchor(w), 1));
    if (!entry.info.linear && depth_ > 2) {
      // Anchor discretization error, estimated against a coarser word table.
      const auto coarse = enumerate_words(c, depth_ - 2);
      std::vector<double> cv;
      for (const auto& w : coarse) cv.push_back(pot(c.anchor(w), 1));
      const double fine = pressure_transfer(transition_, words_, values_, depth_, false).estimate.value;
      const double rough = pressure_transfer(transition_, coarse, cv, depth_ - 2, false).estimate.value;
      residual_ = m * std::abs(fine - rough);
    }
    return;
  }
  mode_ = Mode::words;
  depth_ = m;
  words_ = enumerate_words(c, m, 1u << 20);
  values_.reserve(words_.size());
  for (const auto& w : words_) values_.push_back(pot(c.anchor(w), m));
}

double PowerPressure::operator()(double t) const {
  switch (mode_) {
    case Mode::constant: return entropy_ + t * constant_value_;
    case Mode::additive: {
      std::vector<double> scaled(values_.size());
      for (std::size_t i = 0; i < values_.size(); ++i) scaled[i] = t * values_[i];
      const auto r = pressure_transfer(transition_, words_, scaled, depth_, false);
      return m_ * r.estimate.value;
    }
    case Mode::words: {
      std::vector<double> scaled(values_.size());
      for (std::size_t i = 0; i < values_.size(); ++i) scaled[i] = t * values_[i];
      return iterate_pressure(transition_, words_, scaled);
    }
  }
  return 0.0;
}

double power_pressure(const CatalogEntry& entry, Bundle bundle, PotentialKind kind, int m, double t,
                      int base_depth) {
  return PowerPressure(entry, bundle, kind, m, base_depth)(t);
}

double sequence_pressure_limit(const CatalogEntry& entry, Bundle bundle, PotentialKind kind, double t) {
  const auto pot = make_potential(entry.system, entry.frame, kind, bundle);
  if (entry.coding && entry.system.constant_jacobian) return pressure_sequence(entry, pot, t, 64, 0.05).value;
  if (entry.frame.dim(bundle) == 1) return PowerPressure(entry, bundle, kind, 1)(t);
  if (!entry.coding) throw InvalidArgument(entry.system.name + ": sequence pressure limit needs a coding");
  int n = 1;
  while (count_words(entry.coding->transition, 2 * n) <= 65536.0 && n < 64) n *= 2;
  SequenceOptions opt;
  opt.method = SequenceOptions::Method::cylinder;
  return pressure_sequence(entry, pot, t, n, 0.05, opt).value;
}

std::vector<ComparisonRow> power_pressure_comparisons(const CatalogEntry& entry, Bundle bundle, int k_max,
                                                      double t) {
  if (k_max < 0 || k_max > 6) throw InvalidArgument("power_pressure_comparisons: k_max must lie in 0..6");
  if (t < 0.0) throw InvalidArgument("power_pressure_comparisons: t must be >= 0");
  const double p_plus = sequence_pressure_limit(entry, bundle, PotentialKind::super_norm, t);
  const double p_minus = sequence_pressure_limit(entry, bundle, PotentialKind::sub_conorm, t);
  std::vector<ComparisonRow> rows;
  for (int k = 0; k <= k_max; ++k) {
    const int m = 1 << k;
    ComparisonRow r;
    r.k = k;
    r.s_column = power_pressure(entry, bundle, PotentialKind::super_norm, m, t) / m;
    r.t_column = power_pressure(entry, bundle, PotentialKind::sub_conorm, m, t) / m;
    r.p_star_plus = p_plus;
    r.p_star_minus = p_minus;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace hypdim
