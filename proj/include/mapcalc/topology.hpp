#pragma once

#include "mapcalc/local_function.hpp"
#include "mapcalc/sampled_map.hpp"
#include "mapcalc/section.hpp"

#include <functional>
#include <vector>

namespace mapcalc {

/// One (chart of M, chart of N, compact set) triple of a subbasis element.
struct NeighborhoodElement {
  int chart_id = 0;
  TargetChart target_chart;
  Box compact;
};

/// Basic open set N^k(f, phi, U, psi, V, K, eps) of the compact-open C^k
/// topology, or a finite intersection of such sets sharing f, eps and k.
class CkNeighborhood {
 public:
  /// Throws InvalidArgument unless eps > 0, and TargetChartViolated unless
  /// f(K) lies in V for every element.
  CkNeighborhood(SampledMap center, std::vector<NeighborhoodElement> elements,
                 double epsilon, int order);

  /// The intersection over the fixed cover {K_i} with the adapted target
  /// charts of f.
  static CkNeighborhood over_cover(const SampledMap& center, double epsilon,
                                   int order);

  const SampledMap& center() const noexcept { return center_; }
  const std::vector<NeighborhoodElement>& elements() const noexcept { return elements_; }
  double epsilon() const noexcept { return epsilon_; }
  int order() const noexcept { return order_; }

 private:
  SampledMap center_;
  std::vector<NeighborhoodElement> elements_;
  double epsilon_;
  int order_;
};

/// Membership of g: g(K) in V on the grid and the sup of jet differences on
/// K strictly below eps, for every element. Throws ResolutionMismatch when g
/// is sampled differently from the centre.
bool nbhd_contains(const CkNeighborhood& nbhd, const SampledMap& g);

/// Largest jet difference of one element (TargetChartViolated when g leaves
/// the element's target chart).
double jet_sup_difference(const SampledMap& f, const SampledMap& g,
                          const NeighborhoodElement& element, int order);

/// max over the cover of f, |alpha| <= k and K_i nodes of the jet
/// difference, in the adapted target charts of f.
double ck_distance(const SampledMap& f, const SampledMap& g, int order);

/// The same distance between g and h measured in a fixed list of target
/// charts (one per domain chart). For fixed charts this is a pseudometric.
double ck_distance(const std::vector<TargetChart>& charts, const SampledMap& g,
                   const SampledMap& h, int order);

struct SectionNormReport {
  struct Entry {
    int chart_id = 0;
    MultiIndex alpha;
    double sup = 0.0;
  };
  std::vector<Entry> entries;
  double total = 0.0;

  json to_json() const;
};

/// C^k norm of a section through the isometric trivializations of the
/// adapted target charts, sup over the K_i nodes.
SectionNormReport section_norm(const PullbackSection& s, int order);

/// A scalar C^(k+1) map R -> R with closed-form derivatives:
/// derivatives[j] is the j-th derivative.
struct ScalarMap {
  std::string name;
  std::vector<std::function<double(double)>> derivatives;
};

struct CompositionProbeResult {
  double max_ratio = 0.0;
  double bound_witness = 0.0;
  int samples_compared = 0;
  std::vector<double> ladder_radii;
  std::vector<double> ladder_witness;
  bool ladder_monotone = true;

  json to_json() const;
};

/// Empirical constant of the composition estimate
///   |Psi o f1 - Psi o f2|_{C^k(K)} <= C |f1 - f2|_{C^k(K)}
/// over the given samples, next to the constant obtained from the chain rule
/// by adding zeros (k <= 2), evaluated at R and along the ladder
/// {0.1, 0.5, 1.0}. K is the closed interval of f1's grid; `hull` is K~.
/// Throws HypothesisViolated when a sample leaves K~ or is farther than R
/// from f1.
CompositionProbeResult composition_bound_probe(const ScalarMap& psi,
                                               const LocalFunction& f1,
                                               const std::vector<LocalFunction>& samples,
                                               double hull_lower, double hull_upper,
                                               double radius, int order);

/// The adding-zeros constant C(R) for the given psi, f1 and hull.
double composition_witness(const ScalarMap& psi, const LocalFunction& f1,
                           double hull_lower, double hull_upper, double radius,
                           int order);

}  // namespace mapcalc
