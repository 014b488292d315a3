#pragma once

#include "hypdim/catalog.hpp"
#include "hypdim/cocycle.hpp"
#include "hypdim/coding.hpp"
#include "hypdim/systems.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace hypdim {

using ScalarField = std::function<double(const Point&)>;

/// S_n phi(x) = sum_{j<n} phi(f^j x).
double birkhoff_sum(const SmoothSystem& sys, const ScalarField& phi, const Point& x, int n);

/// Bowen distance d_n(x, y) = max_{0<=i<n} d(f^i x, f^i y).
double bowen_distance(const SmoothSystem& sys, const Point& x, const Point& y, int n);

struct SeparatedSet {
  int n = 1;
  double epsilon = 0.0;
  std::vector<Point> points;
  std::vector<std::string> warnings;
};

/// Greedy maximal (f, n, epsilon)-separated subset of the seeds, in seed
/// order. A `seed_spacing` above epsilon/2 is recorded as a warning.
SeparatedSet max_separated_set(const SmoothSystem& sys, int n, double epsilon, const std::vector<Point>& seeds,
                               double seed_spacing = 0.0);

/// Exhaustive pairwise check of the separation invariant.
bool is_separated(const SmoothSystem& sys, const SeparatedSet& set);

enum class PressureMethod {
  separated,          // greedy separated set from a seed cover
  cylinder,           // one anchor per admissible n-word (a canonical separated set)
  transfer_operator,  // spectral radius of the weighted word-transition operator
};

std::string_view to_string(PressureMethod m);

struct PressureRow {
  int k = 0;
  int n = 0;
  double epsilon = 0.0;
  double value = 0.0;  // raw (1/n) log sum
  PressureMethod method = PressureMethod::separated;
};

/// value is the extrapolation 2 V(n) - V(n/2) of the raw values V, which
/// cancels the O(1/n) bias; `residual` is its distance from the previous
/// extrapolation in the table.
struct PressureEstimate {
  double value = 0.0;
  int n_used = 0;
  double epsilon_used = 0.0;
  PressureMethod method = PressureMethod::separated;
  double residual = 0.0;
  std::vector<PressureRow> diagnostics;
  std::vector<std::string> warnings;
};

struct EquilibriumData {
  int depth = 0;
  std::vector<Word> words;
  std::vector<double> cylinder_weights;
  double entropy = 0.0;
  double potential_integral = 0.0;
};

/// Seed cover for an (n, epsilon) separated-set computation on a catalog entry.
std::vector<Point> separated_seeds(const CatalogEntry& entry, int n, double epsilon, double* spacing = nullptr);

PressureEstimate pressure_separated(const CatalogEntry& entry, const ScalarField& phi, int n, double epsilon);

struct SequenceOptions {
  /// auto: constant-Jacobian counting when exact, else cylinder sums for
  /// coded systems (n halved until the word count fits, with a warning),
  /// else separated sets.
  enum class Method { automatic, separated, cylinder } method = Method::automatic;
  std::uint64_t max_words = 1u << 20;
};

/// Sequence pressure P*_n(f, t F, epsilon) with F the given potential sequence.
PressureEstimate pressure_sequence(const CatalogEntry& entry, const PotentialSequence& pot, double t, int n,
                                   double epsilon, const SequenceOptions& options = {});

/// log spectral radius of M[u][v] = [u -> v admissible shift] exp(phi(u))
/// over admissible words of the given depth. Throws NumericalError for a
/// reducible transition structure.
struct TransferResult {
  PressureEstimate estimate;
  EquilibriumData equilibrium;
};

TransferResult pressure_transfer(const MarkovCoding& coding, const std::function<double(const Word&)>& phi,
                                 int depth);

/// Same, with phi already evaluated on the lexicographically enumerated words.
TransferResult pressure_transfer(const TransitionMatrix& a, const std::vector<Word>& words,
                                 const std::vector<double>& phi, int depth, bool want_equilibrium = true);

/// Pressure of the iterate f^m with a potential given on admissible m-words:
/// log spectral radius of K = A G, G[c][b] = sum_{u: first c, last b} exp psi(u).
double iterate_pressure(const TransitionMatrix& a, const std::vector<Word>& words, const std::vector<double>& psi);

/// log of the Perron root of a non-negative square array.
double log_spectral_radius(const Matrix& m);

/// t -> P(f^m, t psi_m) for psi_m the m-step potential of the given kind,
/// with all word potentials evaluated once. Uses exact counting for constant
/// Jacobians, the additive reduction P(f^m, S_m phi) = m P(f, phi) for
/// one-dimensional bundles, otherwise anchors of admissible m-words.
class PowerPressure {
 public:
  PowerPressure(const CatalogEntry& entry, Bundle bundle, PotentialKind kind, int m, int base_depth = 12);
  double operator()(double t) const;
  int m() const { return m_; }
  /// Numerical error bound of one evaluation.
  double residual() const { return residual_; }

 private:
  enum class Mode { constant, additive, words } mode_ = Mode::words;
  int m_ = 1;
  int depth_ = 1;
  double entropy_ = 0.0;
  double constant_value_ = 0.0;
  double residual_ = 1e-12;
  TransitionMatrix transition_;
  std::vector<Word> words_;
  std::vector<double> values_;
};

struct CrossCheck {
  double p_plus = 0.0;   // P*(t F+) from super_norm
  double p_minus = 0.0;  // P*(t F-) from sub_conorm
  double gap = 0.0;
  bool average_conformal = true;
};

CrossCheck variational_crosscheck(const CatalogEntry& entry, Bundle bundle, double t, int n, double epsilon,
                                  const SequenceOptions& options = {});

/// One-shot PowerPressure evaluation.
double power_pressure(const CatalogEntry& entry, Bundle bundle, PotentialKind kind, int m, double t,
                      int base_depth = 12);

/// Best available estimate of P*(f, t F) for the sequence of the given kind:
/// the n = 64 extrapolation for constant Jacobians, the exact additive
/// pressure for one-dimensional bundles, else cylinder sums at the largest
/// affordable n.
double sequence_pressure_limit(const CatalogEntry& entry, Bundle bundle, PotentialKind kind, double t);

struct ComparisonRow {
  int k = 0;
  double s_column = 0.0;  // (1/2^k) P(f^{2^k}, t Phi_{2^k})
  double t_column = 0.0;  // (1/2^k) P(f^{2^k}, t phi_{2^k})
  double p_star_plus = 0.0;
  double p_star_minus = 0.0;
};

std::vector<ComparisonRow> power_pressure_comparisons(const CatalogEntry& entry, Bundle bundle, int k_max,
                                                      double t);

/// CSV with header k,n,epsilon,value,method.
void write_pressure_csv(std::ostream& os, const std::vector<PressureRow>& rows);

}  // namespace hypdim
