#pragma once

#include "mixkde/codes.hpp"
#include "mixkde/density.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mixkde {

//! Parameters of the perturbed plateau family.
struct FamilyParams
{
  int s1 = 1;
  int s2 = 1;
  int d1 = 1;
  int d2 = 1;
  double p = 2.0;
  double r = 1.0;
  double N = 20.0;
  double kappa = 1.0;
  double sigma = 0.0;
  double A = 0.0;
  std::size_t M = 0;
  double epsilon = 0.5;
  double r_star = 1.0;
  bool compact_regime = true;

  //! Sample size the parameters were chosen for (0 when set by hand).
  std::size_t n = 0;
  //! Constants of the parameter choice; zero when not applicable.
  double C0 = 0, C1 = 0, C2 = 0, C3 = 0, C4 = 0, C5 = 0, C6 = 0, C7 = 0;

  int S() const { return s1 + s2; }
  int D() const { return d1 + d2; }
  std::size_t word_length() const;

  //! Bump centre along one axis, j = 1..M.
  double xi(std::size_t j) const;
  //! Left end of the bump grid, xi_1 - 4 sigma.
  double grid_lower() const;
  //! Cell width 8 sigma.
  double cell_width() const { return 8.0 * sigma; }

  //! Throws infeasible_parameters naming the first violated invariant.
  void validate() const;
};

//! epsilon and r_* from (p, r).
double family_epsilon(double p, double r);
double family_r_star(double p, double r);

//! Parameters set by hand for small instances: sigma = N / (20 kappa M),
//! epsilon and r_* from (p, r). No invariant is checked.
FamilyParams manual_params(int s1, int s2, int d1, int d2, double p, double r, double N, double kappa,
                           std::size_t M, double A);

struct GNorms
{
  double p_norm = 0.0; //!< ||g||_p
  double l2_norm = 0.0; //!< ||g||_2
  double sobolev = 0.0; //!< sum_{j <= S} ||g^{(j)}||_p
};

GNorms g_norms(double p, int S);

//! ||k||_{W^{m}_p} on the real line, sum_{j <= m} ||k^{(j)}||_p.
double bump_sobolev_norm(double p, int m);

FamilyParams choose_parameters(std::size_t n, double r, double p, int s1, int s2, int d1, int d2,
                               bool compact_regime, double N = 20.0);

Density build_f0(const FamilyParams& params);

class LowerBoundFamily
{
public:
  FamilyParams params;
  Density f0;
  Code code;
  GNorms gnorms;

  std::size_t word_length() const { return params.word_length(); }

  //! F_omega and its partials.
  double perturbation(const Word& w, Point x) const;
  double perturbation_partial(const Word& w, Point x, const MultiIndex& alpha) const;

  //! f_omega = f_0 + F_omega, sampled by rejection from f_0 + A on supp f_0.
  Density member(const Word& w) const;

  //! Integration partition of supp f_0: fine panels in transition bands
  //! and in cells whose bit is set in `active` (all cells when null).
  std::vector<Piece> pieces(const Word* active, std::size_t panels_per_cell = 16) const;

  //! Partition of the bump grid alone.
  std::vector<Piece> grid_pieces(const Word* active, std::size_t panels_per_cell = 16) const;

  //! Index pi(m) - 1 of the cell containing x, or -1 outside the grid.
  long cell_index(Point x) const;

private:
  std::vector<Piece> make_pieces(const Word* active, std::size_t panels_per_cell, bool grid_only) const;
  void check_word(const Word& w) const;
};

LowerBoundFamily build_family(const FamilyParams& params, std::uint64_t seed = 0);

//! ||f_w - f_w'||_p^p in closed form.
double family_distance(const LowerBoundFamily& fam, const Word& w, const Word& w2);

//! The same quantity by quadrature of f_w - f_w'.
double family_distance_quadrature(const LowerBoundFamily& fam, const Word& w, const Word& w2,
                                  std::size_t panels_per_cell = 16);

//! E_{f_0}(prod f_w(X_i) / f_0(X_i))^2 = (1 + ||F_w||_2^2 (N/kappa)^D)^n in closed form.
double chi2_affinity(const LowerBoundFamily& fam, const Word& w, std::size_t n);

//! \int F_w^2 / f_0 by quadrature over the bump grid.
double chi2_quadrature(const LowerBoundFamily& fam, const Word& w, std::size_t panels_per_cell = 16);

} // namespace mixkde
