#pragma once

// Even positive-definite lattices given by a Gram matrix in a fixed basis.
// Vectors of K (x) Q are coordinate vectors in that basis, so (x, y) = x^T G y.

#include "rlab/cyclotomic.hpp"
#include "rlab/laurent.hpp"
#include "rlab/nilpotent.hpp"
#include "rlab/qseries.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rlab {

using IntMatrix = std::vector<std::vector<long>>;
using RatMatrix = std::vector<RatVec>;

class InvalidLattice : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EvenLattice {
  int rank = 0;
  IntMatrix gram;
  std::string name;

  Rational pair(const RatVec& a, const RatVec& b) const;
  Rational norm(const RatVec& a) const { return pair(a, a); }
  RatVec zero() const { return RatVec(static_cast<std::size_t>(rank), Rational(0)); }
  RatVec basis_vector(int i) const;
};

/// Checks symmetry, even diagonal and positive definiteness. Rank 0 is allowed.
EvenLattice validate(const IntMatrix& gram, std::string name = "");

/// {"rank": c, "gram": [[..]..] or flat row-major, "name": optional}.
EvenLattice lattice_from_json_text(const std::string& text);
EvenLattice load_lattice(const std::string& path);
std::string lattice_json(const EvenLattice& L);

/// A1, A2, E8 (Bourbaki labelling), D4, or "gramN" for the rank-one lattice [[N]].
EvenLattice standard_lattice(const std::string& name);

Integer determinant(const IntMatrix& m);
RatMatrix inverse_matrix(const IntMatrix& m);

/// U * A * V = diag(d) with d_i | d_{i+1}, U and V unimodular.
struct SmithForm {
  std::vector<std::vector<Integer>> U, V;
  std::vector<Integer> d;
};
SmithForm smith_normal_form(const IntMatrix& a);

struct DualData {
  RatMatrix gram_inverse;
  std::vector<RatVec> coset_reps;  // beta_g = V (a / d), 0 <= a_i < d_i, mixed radix order
  long group_order = 1;
  std::vector<long> invariants;  // elementary divisors > 1
  std::vector<std::vector<Integer>> smith_v;
  std::vector<std::vector<Integer>> smith_v_inverse;
  std::vector<Integer> smith_d;

  /// Index of the coset x + K; throws if x is not in the dual lattice.
  std::size_t coset_of(const RatVec& x) const;
};
DualData discriminant_group(const EvenLattice& L);

/// Vectors of K + offset with (g, g)/2 <= bound, sorted lexicographically.
std::vector<RatVec> enumerate(const EvenLattice& L, const RatVec& offset, const Rational& bound);

/// Calls f(y) for every g = y / scale in K + offset with (g, g)/2 <= bound,
/// where y is an integer vector and scale the common denominator of offset.
void for_each_point(const EvenLattice& L, const RatVec& offset, const Rational& bound,
                    const std::function<void(const std::vector<long>&)>& f);
long common_denominator(const RatVec& v);

/// gamma -> product of images; three instances.
struct ExpCharacter {
  enum class Kind { trivial, rational, genus };
  Kind kind = Kind::trivial;
  RatVec h;  // rational: e^{2 pi i (h, gamma)}
  RatVec t;  // genus: z^{(t, gamma)} exp((U, gamma)),
  std::vector<std::pair<Nilpotent<Rational>, RatVec>> u;  // U = sum n_j (x) u_j

  static ExpCharacter trivial() { return {}; }
  static ExpCharacter rational(RatVec h);
  static ExpCharacter genus(RatVec t, std::vector<std::pair<Nilpotent<Rational>, RatVec>> u);
};

/// theta_{K+beta}(h + alpha tau) = sum_{g in K+beta} phase(g) q^{(alpha,g) + (g,g)/2},
/// complete up to q^cutoff. With no tau_shift alpha = 0.
QSeries<CycRat> theta_series(const EvenLattice& L, const RatVec& coset_rep, const ExpCharacter& phase,
                             const std::optional<RatVec>& tau_shift, const Rational& cutoff);

/// Genus instance: coefficients z^{(t,g)} exp((U,g)) in the nilpotent ring over Laurent polynomials.
/// With tau_shift alpha: sum phase(g) q^{(alpha,g) + (g,g)/2}, as for theta_series.
QSeries<Nilpotent<LaurentZ>> genus_theta_series(const EvenLattice& L, const RatVec& coset_rep,
                                                const ExpCharacter& phase, const Rational& cutoff,
                                                const std::optional<RatVec>& tau_shift = std::nullopt);

}  // namespace rlab
