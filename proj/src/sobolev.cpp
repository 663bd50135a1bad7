#include "mixkde/sobolev.hpp"

#include "mixkde/error.hpp"
#include "mixkde/product_kernel.hpp"

namespace mixkde {

Variant
parse_variant(const std::string& name)
{
  if (name == "mixed")
    return Variant::mixed;
  if (name == "classical")
    return Variant::classical;
  if (name == "aniso")
    return Variant::aniso;
  throw parameter_error("unknown smoothness variant '" + name + "'");
}

std::string
to_string(Variant v)
{
  switch (v) {
    case Variant::mixed:
      return "mixed";
    case Variant::classical:
      return "classical";
    case Variant::aniso:
      return "aniso";
  }
  return "?";
}

void
SmoothnessSpec::validate() const
{
  if (s1 < 1 || s2 < 1 || d1 < 1 || d2 < 1)
    throw parameter_error("SmoothnessSpec: s1, s2, d1, d2 must be positive");
  if (!(p >= 1.0))
    throw domain_error("SmoothnessSpec: p must satisfy p >= 1");
}

double
DifferentiableField::derivative(Point x, const MultiIndex& alpha) const
{
  if (partial)
    return partial(x, alpha);
  if (order(alpha) == 0)
    return eval(x);
  return partial_fd(eval, x, alpha);
}

std::vector<MultiIndex>
index_set(const SmoothnessSpec& spec)
{
  spec.validate();
  std::vector<MultiIndex> out;
  if (spec.variant == Variant::classical) {
    const int d = spec.d1 + spec.d2;
    for (int total = 0; total <= spec.s1; ++total) {
      auto level = indices_of_order(d, total);
      out.insert(out.end(), level.begin(), level.end());
    }
    return out;
  }
  for (int n1 = 0; n1 <= spec.s1; ++n1) {
    for (int n2 = 0; n2 <= spec.s2; ++n2) {
      if (spec.variant == Variant::aniso && n1 * spec.s2 + n2 * spec.s1 > spec.s1 * spec.s2)
        continue;
      for (const auto& a1 : indices_of_order(spec.d1, n1)) {
        for (const auto& a2 : indices_of_order(spec.d2, n2)) {
          MultiIndex a = a1;
          a.insert(a.end(), a2.begin(), a2.end());
          out.push_back(std::move(a));
        }
      }
    }
  }
  return out;
}

double
sobolev_sum(const DifferentiableField& f, const std::vector<MultiIndex>& alphas, double p,
            const QuadRule& rule)
{
  double total = 0.0;
  for (const auto& alpha : alphas) {
    if (!f.partial && order(alpha) > max_fd_order)
      throw unsupported_order("finite-difference partials are limited to total order 6");
    Field d = [&f, &alpha](Point x) { return f.derivative(x, alpha); };
    total += f.pieces.empty() ? lp_norm(d, f.support, p, rule)
                              : lp_norm(d, f.pieces, p, rule.nodes_per_panel);
  }
  return total;
}

namespace {

double
norm_for(const DifferentiableField& f, SmoothnessSpec spec, Variant v, const QuadRule& rule)
{
  spec.variant = v;
  return sobolev_sum(f, index_set(spec), spec.p, rule);
}

} // namespace

double
mixed_norm(const DifferentiableField& f, const SmoothnessSpec& spec, const QuadRule& rule)
{
  return norm_for(f, spec, Variant::mixed, rule);
}

double
classical_norm(const DifferentiableField& f, const SmoothnessSpec& spec, const QuadRule& rule)
{
  return norm_for(f, spec, Variant::classical, rule);
}

double
aniso_norm(const DifferentiableField& f, const SmoothnessSpec& spec, const QuadRule& rule)
{
  return norm_for(f, spec, Variant::aniso, rule);
}

double
sobolev_norm(const DifferentiableField& f, const SmoothnessSpec& spec, const QuadRule& rule)
{
  return norm_for(f, spec, spec.variant, rule);
}

Membership
ball_membership(const DifferentiableField& f, const SmoothnessSpec& spec, double r,
                const QuadRule& rule)
{
  if (!(r > 0))
    throw parameter_error("ball_membership: r must be positive");
  Membership m;
  m.norm = sobolev_norm(f, spec, rule);
  m.member = m.norm <= r;
  return m;
}

} // namespace mixkde
