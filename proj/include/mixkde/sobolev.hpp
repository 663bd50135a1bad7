#pragma once

#include "mixkde/quadrature.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mixkde {

enum class Variant
{
  mixed,
  classical,
  aniso
};

Variant parse_variant(const std::string& name);
std::string to_string(Variant v);

//! For the classical variant the order is s1 and the dimension d1 + d2.
struct SmoothnessSpec
{
  int s1 = 1;
  int s2 = 1;
  int d1 = 1;
  int d2 = 1;
  double p = 2.0;
  Variant variant = Variant::mixed;

  std::size_t dim() const { return static_cast<std::size_t>(d1 + d2); }
  void validate() const;
};

using PartialField = std::function<double(Point, const MultiIndex&)>;

//! A field with a bounded support and, optionally, closed-form partials.
//!
//! Without `partial`, derivatives are taken by finite differences, which
//! limits the usable orders to 6. When `pieces` is non-empty the norms
//! integrate over that partition (each piece carries its own panel counts)
//! instead of over `support` with the caller's rule.
struct DifferentiableField
{
  Field eval;
  Box support;
  PartialField partial;
  std::vector<Piece> pieces;

  double derivative(Point x, const MultiIndex& alpha) const;
};

//! The multi-indices (length d1 + d2) summed by each variant.
std::vector<MultiIndex> index_set(const SmoothnessSpec& spec);

//! Sum over `alphas` of ||d^alpha f||_p.
double sobolev_sum(const DifferentiableField& f, const std::vector<MultiIndex>& alphas, double p,
                   const QuadRule& rule);

double mixed_norm(const DifferentiableField& f, const SmoothnessSpec& spec, const QuadRule& rule);
double classical_norm(const DifferentiableField& f, const SmoothnessSpec& spec, const QuadRule& rule);
double aniso_norm(const DifferentiableField& f, const SmoothnessSpec& spec, const QuadRule& rule);

//! Dispatches on spec.variant.
double sobolev_norm(const DifferentiableField& f, const SmoothnessSpec& spec, const QuadRule& rule);

struct Membership
{
  bool member = false;
  double norm = 0.0;
};

Membership ball_membership(const DifferentiableField& f, const SmoothnessSpec& spec, double r,
                           const QuadRule& rule);

} // namespace mixkde
