#include "mixkde/lower_bound.hpp"

#include "mixkde/bump.hpp"
#include "mixkde/error.hpp"
#include "mixkde/random.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace mixkde {

std::size_t
FamilyParams::word_length() const
{
  std::size_t m = 1;
  for (int i = 0; i < D(); ++i)
    m *= M;
  return m;
}

double
FamilyParams::xi(std::size_t j) const
{
  return -(N - 4.0) / (4.0 * kappa) + 8.0 * static_cast<double>(j) * sigma;
}

double
FamilyParams::grid_lower() const
{
  return xi(1) - 4.0 * sigma;
}

void
FamilyParams::validate() const
{
  auto fail = [](const std::string& what) { throw infeasible_parameters("violated: " + what); };
  if (!(p >= 1.0))
    fail("p >= 1");
  if (p == 1.0 && !(r > 1.0))
    fail("r > 1 when p = 1");
  if (!(N > 8.0))
    fail("N > 8");
  if (!(kappa > 0.0 && kappa <= 1.0))
    fail("0 < kappa <= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    fail("0 < epsilon < 1");
  if (!(sigma > 0.0 && sigma < std::min(1.0, 1.0 / (20.0 * kappa))))
    fail("sigma < min(1, 1/(20 kappa))");
  if (M < 1 || std::abs(static_cast<double>(M) - N / (20.0 * kappa * sigma)) > 1e-9 * static_cast<double>(M))
    fail("M = N/(20 kappa sigma) integer");
  if (static_cast<double>(word_length()) < 8.0)
    fail("M^D >= 8");
  if (!(A > 0.0 && A <= std::pow(kappa / N, D())))
    fail("A <= (kappa/N)^D");
  if (r_star != family_r_star(p, r))
    fail("r_* = r - 1 for p = 1, r otherwise");
}

double
family_epsilon(double p, double r)
{
  return p > 1.0 ? 0.5 : (r + 1.0) / (2.0 * r);
}

double
family_r_star(double p, double r)
{
  return p == 1.0 ? r - 1.0 : r;
}

FamilyParams
manual_params(int s1, int s2, int d1, int d2, double p, double r, double N, double kappa,
              std::size_t M, double A)
{
  FamilyParams fp;
  fp.s1 = s1;
  fp.s2 = s2;
  fp.d1 = d1;
  fp.d2 = d2;
  fp.p = p;
  fp.r = r;
  fp.N = N;
  fp.kappa = kappa;
  fp.M = M;
  fp.sigma = N / (20.0 * kappa * static_cast<double>(M));
  fp.A = A;
  fp.epsilon = family_epsilon(p, r);
  fp.r_star = family_r_star(p, r);
  return fp;
}

namespace {

double
abs_pow(double v, double p)
{
  const double a = std::abs(v);
  return p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p));
}

// (\int_lo^hi |f|^p)^{1/p} with unit-length pieces split into fine panels.
template<class F>
double
line_norm(F f, double lo, double hi, double p, std::size_t panels_per_unit)
{
  std::vector<double> x;
  std::vector<double> w;
  double sum = 0.0;
  for (double a = lo; a < hi - 1e-12; a += 1.0) {
    composite_nodes(a, std::min(a + 1.0, hi), panels_per_unit, 16, x, w);
    for (std::size_t i = 0; i < x.size(); ++i)
      sum += w[i] * abs_pow(f(x[i]), p);
  }
  return std::pow(sum, 1.0 / p);
}

} // namespace

GNorms
g_norms(double p, int S)
{
  if (!(p >= 1.0))
    throw domain_error("g_norms: p must satisfy p >= 1");
  GNorms gn;
  gn.p_norm = line_norm(g_function, -2.0, 2.0, p, 128);
  gn.l2_norm = line_norm(g_function, -2.0, 2.0, 2.0, 128);
  gn.sobolev = gn.p_norm;
  for (int j = 1; j <= S; ++j)
    gn.sobolev += line_norm([j](double t) { return g_derivative(t, j); }, -2.0, 2.0, p, 128);
  return gn;
}

double
bump_sobolev_norm(double p, int m)
{
  double total = 0.0;
  for (int j = 0; j <= m; ++j)
    total += line_norm([j](double u) { return bump_k_derivative(u, j); }, -1.0, 1.0, p, 256);
  return total;
}

namespace {

void
round_grid(FamilyParams& fp, double ln2_over_8)
{
  const double m_real = fp.N / (20.0 * fp.kappa * fp.sigma);
  if (!(m_real >= 1.0))
    throw infeasible_parameters("violated: M = floor(N/(20 kappa sigma)) >= 1");
  fp.M = static_cast<std::size_t>(std::floor(m_real));
  fp.sigma = fp.N / (20.0 * fp.kappa * static_cast<double>(fp.M));
  // keep the likelihood-ratio budget after the rounding of M
  const double md = static_cast<double>(fp.word_length());
  const double a_max =
    std::sqrt(md * ln2_over_8 / (fp.C2 * static_cast<double>(fp.n) * std::pow(fp.N, 2.0 * fp.D())));
  fp.A = std::min(fp.A, a_max);
}

} // namespace

FamilyParams
choose_parameters(std::size_t n, double r, double p, int s1, int s2, int d1, int d2,
                  bool compact_regime, double N)
{
  if (n == 0)
    throw parameter_error("choose_parameters: n must be positive");
  if (s1 < 1 || s2 < 1 || d1 < 1 || d2 < 1)
    throw parameter_error("choose_parameters: s1, s2, d1, d2 must be positive");
  if (!(p >= 1.0))
    throw domain_error("choose_parameters: p must satisfy p >= 1");
  if (!(r > 0.0) || (p == 1.0 && !(r > 1.0)))
    throw infeasible_parameters("violated: r > 1 when p = 1 (r > 0 otherwise)");

  FamilyParams fp;
  fp.s1 = s1;
  fp.s2 = s2;
  fp.d1 = d1;
  fp.d2 = d2;
  fp.p = p;
  fp.r = r;
  fp.n = n;
  fp.compact_regime = compact_regime;
  fp.epsilon = family_epsilon(p, r);
  fp.r_star = family_r_star(p, r);

  const int S = fp.S();
  const int D = fp.D();
  const double Sd = S;
  const double Dd = D;
  const double nd = static_cast<double>(n);
  const double ln2_over_8 = std::numbers::ln2 / 8.0;
  const GNorms gn = g_norms(p, S);

  fp.C0 = std::pow(2.0 * bump_sobolev_norm(p, S - 1) / bump_l1_norm(), Dd);
  const double er = fp.epsilon * r;
  fp.kappa = p > 1.0 ? std::min(1.0, std::pow(er / fp.C0, 1.0 / (Dd * (1.0 - 1.0 / p))))
                     : std::min(1.0, (er - 1.0) / fp.C0);
  if (!(fp.kappa > 0.0))
    throw infeasible_parameters("violated: 0 < kappa <= 1");
  const double k20 = 20.0 * fp.kappa;
  fp.C2 = std::pow(20.0, -Dd) * std::pow(fp.kappa, -2.0 * Dd) * std::pow(gn.l2_norm, 2.0 * Dd);
  fp.C1 = 0.5 * std::pow(gn.p_norm, Dd) * std::pow(1.0 / k20, Dd / p) * std::pow(8.0, -1.0 / p);

  if (compact_regime) {
    fp.N = N;
    fp.C3 = 2.0 * std::pow(gn.sobolev, Dd) * std::pow(N / k20, Dd / p);
    fp.C4 = std::pow(fp.C3, 1.0 / Sd);
    fp.C5 = std::pow(ln2_over_8 / (fp.C2 * std::pow(fp.C4, Dd) * std::pow(N, Dd) * std::pow(k20, Dd)),
                     Sd / (2.0 * Sd + Dd));
    fp.A = fp.C5 * std::pow(std::pow(fp.r_star, Dd / Sd) / nd, Sd / (2.0 * Sd + Dd));
    fp.sigma = fp.C4 * std::pow(fp.A, 1.0 / Sd) * std::pow(fp.r_star, -1.0 / Sd);
  } else {
    fp.C3 = 2.0 * std::pow(k20, -Dd / p) * std::pow(gn.sobolev, Dd);
    fp.C4 = std::pow(fp.C3, 1.0 / Sd);
    fp.C5 = ln2_over_8 / (fp.C2 * std::pow(fp.C4, Dd) * std::pow(k20, Dd));
    const double q = p * Sd + (p - 1.0) * Dd;
    double c6 = std::pow(fp.kappa, Dd) / 2.0;
    for (int halving = 0;; ++halving) {
      fp.C6 = c6;
      fp.C7 = std::pow(fp.C5 * std::pow(c6, -(p * Sd + Dd) / (p * Sd)), p * Sd / q);
      fp.A = fp.C7 * std::pow(nd, -p * Sd / q) * std::pow(fp.r_star, p * Dd / q);
      fp.N = std::pow(c6 / fp.A, 1.0 / Dd);
      fp.sigma = fp.C4 * std::pow(fp.A, 1.0 / Sd) * std::pow(fp.N, Dd / (p * Sd)) *
                 std::pow(fp.r_star, -1.0 / Sd);
      if (fp.sigma <= 1.0 / k20 || p > 1.0 || halving >= 200)
        break;
      c6 *= 0.5;
    }
  }

  if (!(fp.N > 8.0))
    throw infeasible_parameters("violated: N > 8");
  if (!(fp.sigma < std::min(1.0, 1.0 / k20)))
    throw infeasible_parameters("violated: sigma < min(1, 1/(20 kappa))");
  round_grid(fp, ln2_over_8);
  fp.validate();
  return fp;
}

Density
build_f0(const FamilyParams& params)
{
  if (!(params.N > 8.0))
    throw parameter_error("build_f0: N must exceed 8");
  if (!(params.kappa > 0.0 && params.kappa <= 1.0))
    throw parameter_error("build_f0: kappa must lie in (0, 1]");
  const double N = params.N;
  const double kappa = params.kappa;
  const double half = (N + 2.0) / (2.0 * kappa);
  auto factor = [N, kappa](double x, int j) {
    const double u = kappa * x;
    double v;
    if (j == 0)
      v = lambda_bar(u + 0.5 * N) - lambda_bar(u - 0.5 * N);
    else
      v = lambda_derivative(u + 0.5 * N, j - 1) - lambda_derivative(u - 0.5 * N, j - 1);
    return (kappa / N) * std::pow(kappa, j) * v;
  };
  std::vector<Factor> factors(static_cast<std::size_t>(params.D()), Factor{ factor, -half, half });
  Density d = product_density(std::move(factors), true, 0.25 / kappa);

  const double plateau = (N - 2.0) / (2.0 * kappa);
  const std::vector<std::pair<double, double>> bands{ { -half, -plateau }, { -plateau, plateau }, { plateau, half } };
  const std::vector<std::size_t> band_panels{ 16, 1, 16 };
  const auto D = static_cast<std::size_t>(params.D());
  std::vector<std::size_t> idx(D, 0);
  for (bool done = false; !done;) {
    std::vector<double> lo(D);
    std::vector<double> hi(D);
    std::vector<std::size_t> panels(D);
    for (std::size_t a = 0; a < D; ++a) {
      lo[a] = bands[idx[a]].first;
      hi[a] = bands[idx[a]].second;
      panels[a] = band_panels[idx[a]];
    }
    d.field.pieces.push_back(Piece{ Box(lo, hi), panels });
    done = true;
    for (std::size_t a = D; a-- > 0;) {
      if (++idx[a] < bands.size()) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
  }
  return d;
}

void
LowerBoundFamily::check_word(const Word& w) const
{
  if (w.size() != word_length()) {
    std::ostringstream ss;
    ss << "family word of length " << w.size() << " where " << word_length() << " is required";
    throw dimension_error(ss.str());
  }
}

long
LowerBoundFamily::cell_index(Point x) const
{
  const double lo = params.grid_lower();
  const double width = params.cell_width();
  long flat = 0;
  const auto M = static_cast<long>(params.M);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = (x[j] - lo) / width;
    if (!(t >= 0.0 && t < static_cast<double>(M)))
      return -1;
    flat = flat * M + static_cast<long>(t);
  }
  return flat;
}

double
LowerBoundFamily::perturbation(const Word& w, Point x) const
{
  const long c = cell_index(x);
  if (c < 0 || w[static_cast<std::size_t>(c)] == 0)
    return 0.0;
  const double lo = params.grid_lower();
  const double width = params.cell_width();
  double v = params.A;
  for (std::size_t j = 0; j < x.size() && v != 0.0; ++j) {
    const auto m = static_cast<std::size_t>((x[j] - lo) / width) + 1;
    v *= g_function((x[j] - params.xi(m)) / params.sigma);
  }
  return v;
}

double
LowerBoundFamily::perturbation_partial(const Word& w, Point x, const MultiIndex& alpha) const
{
  const long c = cell_index(x);
  if (c < 0 || w[static_cast<std::size_t>(c)] == 0)
    return 0.0;
  const double lo = params.grid_lower();
  const double width = params.cell_width();
  double v = params.A;
  for (std::size_t j = 0; j < x.size() && v != 0.0; ++j) {
    const auto m = static_cast<std::size_t>((x[j] - lo) / width) + 1;
    v *= g_derivative((x[j] - params.xi(m)) / params.sigma, alpha[j]) /
         std::pow(params.sigma, alpha[j]);
  }
  return v;
}

std::vector<Piece>
LowerBoundFamily::make_pieces(const Word* active, std::size_t panels_per_cell, bool grid_only) const
{
  struct Interval
  {
    double lo;
    double hi;
    long cell; // -1 for non-cell bands
    std::size_t panels;
  };
  const double N = params.N;
  const double kappa = params.kappa;
  const double half = (N + 2.0) / (2.0 * kappa);
  const double plateau = (N - 2.0) / (2.0 * kappa);
  const double lo = params.grid_lower();
  const double width = params.cell_width();
  const double grid_hi = lo + width * static_cast<double>(params.M);

  std::vector<Interval> axis;
  if (!grid_only) {
    axis.push_back({ -half, -plateau, -1, 16 });
    if (lo > -plateau)
      axis.push_back({ -plateau, lo, -1, 1 });
  }
  for (std::size_t k = 0; k < params.M; ++k)
    axis.push_back({ lo + width * static_cast<double>(k), lo + width * static_cast<double>(k + 1),
                     static_cast<long>(k), 1 });
  if (!grid_only) {
    if (grid_hi < plateau)
      axis.push_back({ grid_hi, plateau, -1, 1 });
    axis.push_back({ plateau, half, -1, 16 });
  }

  const auto D = static_cast<std::size_t>(params.D());
  const auto M = static_cast<long>(params.M);
  std::vector<Piece> out;
  std::vector<std::size_t> idx(D, 0);
  for (bool done = false; !done;) {
    bool in_grid = true;
    long flat = 0;
    for (std::size_t a = 0; a < D; ++a) {
      const auto& iv = axis[idx[a]];
      in_grid = in_grid && iv.cell >= 0;
      flat = flat * M + std::max(iv.cell, 0L);
    }
    const bool fine = in_grid && (active == nullptr || (*active)[static_cast<std::size_t>(flat)] != 0);
    std::vector<double> plo(D);
    std::vector<double> phi(D);
    std::vector<std::size_t> panels(D);
    for (std::size_t a = 0; a < D; ++a) {
      const auto& iv = axis[idx[a]];
      plo[a] = iv.lo;
      phi[a] = iv.hi;
      panels[a] = fine ? panels_per_cell : iv.panels;
    }
    out.push_back(Piece{ Box(plo, phi), panels });
    done = true;
    for (std::size_t a = D; a-- > 0;) {
      if (++idx[a] < axis.size()) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
  }
  return out;
}

std::vector<Piece>
LowerBoundFamily::pieces(const Word* active, std::size_t panels_per_cell) const
{
  if (active)
    check_word(*active);
  return make_pieces(active, panels_per_cell, false);
}

std::vector<Piece>
LowerBoundFamily::grid_pieces(const Word* active, std::size_t panels_per_cell) const
{
  if (active)
    check_word(*active);
  return make_pieces(active, panels_per_cell, true);
}

Density
LowerBoundFamily::member(const Word& w) const
{
  check_word(w);
  auto self = std::make_shared<const LowerBoundFamily>(*this);
  auto word = std::make_shared<const Word>(w);

  Density d;
  d.field.support = f0.field.support;
  d.field.pieces = pieces(&w);
  d.field.eval = [self, word](Point x) { return self->f0(x) + self->perturbation(*word, x); };
  d.field.partial = [self, word](Point x, const MultiIndex& alpha) {
    return self->f0.field.partial(x, alpha) + self->perturbation_partial(*word, x, alpha);
  };
  d.compact = true;
  d.feature_scale = std::min(f0.feature_scale, 0.5 * params.sigma);
  d.sampler_kind = SamplerKind::rejection;

  const auto D = static_cast<std::size_t>(params.D());
  const double half = (params.N + 2.0) / (2.0 * params.kappa);
  const double volume = std::pow(2.0 * half, static_cast<double>(D));
  const double A = params.A;
  const double f0_share = 1.0 / (1.0 + A * volume);
  auto tables = std::make_shared<std::vector<MarginalTable>>();
  for (const auto& f : f0.factors)
    tables->emplace_back([&f](double x) { return f.deriv(x, 0); }, f.lo, f.hi);
  d.sampler = [self, word, tables, D, half, A, f0_share](std::uint64_t seed, std::size_t count) {
    SampleSet out(D);
    out.data.reserve(count * D);
    std::mt19937_64 rng(seed);
    std::vector<double> x(D);
    std::size_t proposals = 0;
    std::size_t accepted = 0;
    while (accepted < count) {
      ++proposals;
      if (uniform01(rng) < f0_share) {
        for (std::size_t a = 0; a < D; ++a)
          x[a] = (*tables)[a].quantile(uniform01(rng));
      } else {
        for (auto& xa : x)
          xa = -half + 2.0 * half * uniform01(rng);
      }
      const double base = self->f0(Point(x));
      const double target = base + self->perturbation(*word, Point(x));
      if (uniform01(rng) * (base + A) <= target) {
        out.push(Point(x));
        ++accepted;
      }
      if (proposals >= 1000 && static_cast<double>(accepted) < 1e-3 * static_cast<double>(proposals))
        throw sampler_degenerate("rejection sampler acceptance rate below 1e-3");
    }
    return out;
  };
  return d;
}

LowerBoundFamily
build_family(const FamilyParams& params, std::uint64_t seed)
{
  LowerBoundFamily fam;
  fam.params = params;
  fam.f0 = build_f0(params);
  if (params.M < 1 || !(params.sigma > 0.0))
    throw construction_error("build_family: M and sigma must be positive");
  if (!(params.A > 0.0 && params.A <= std::pow(params.kappa / params.N, params.D())))
    throw construction_error("build_family: A must lie in (0, (kappa/N)^D] for nonnegativity");
  const double plateau = (params.N - 2.0) / (2.0 * params.kappa);
  const double lo = params.grid_lower();
  const double hi = lo + params.cell_width() * static_cast<double>(params.M);
  if (lo < -plateau - 1e-12 || hi > plateau + 1e-12)
    throw construction_error("build_family: bump blocks leave the plateau of f_0");

  const std::size_t m = params.word_length();
  fam.code = m < 8 ? hypercube_code(m) : vg_code(m, seed);
  fam.gnorms = g_norms(params.p, params.S());
  return fam;
}

namespace {

void
check_pair(const LowerBoundFamily& fam, const Word& w, const Word& w2)
{
  if (w.size() != fam.word_length() || w2.size() != fam.word_length())
    throw dimension_error("family word length differs from M^D");
}

} // namespace

double
family_distance(const LowerBoundFamily& fam, const Word& w, const Word& w2)
{
  check_pair(fam, w, w2);
  const auto& fp = fam.params;
  const double D = fp.D();
  return std::pow(fp.A, fp.p) * static_cast<double>(hamming(w, w2)) * std::pow(fp.sigma, D) *
         std::pow(fam.gnorms.p_norm, fp.p * D);
}

double
family_distance_quadrature(const LowerBoundFamily& fam, const Word& w, const Word& w2,
                           std::size_t panels_per_cell)
{
  check_pair(fam, w, w2);
  Word diff(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    diff[i] = static_cast<std::uint8_t>(w[i] != w2[i]);
  const Density a = fam.member(w);
  const Density b = fam.member(w2);
  Field f = [&a, &b](Point x) { return a(x) - b(x); };
  const auto pieces = fam.grid_pieces(&diff, panels_per_cell);
  return std::pow(lp_norm(f, pieces, fam.params.p, 8), fam.params.p);
}

double
chi2_affinity(const LowerBoundFamily& fam, const Word& w, std::size_t n)
{
  if (w.size() != fam.word_length())
    throw dimension_error("family word length differs from M^D");
  const auto& fp = fam.params;
  const double D = fp.D();
  const double x = std::pow(fp.kappa, -D) * std::pow(fp.N, D) * fp.A * fp.A *
                   static_cast<double>(weight(w)) * std::pow(fp.sigma, D) *
                   std::pow(fam.gnorms.l2_norm, 2.0 * D);
  return std::exp(static_cast<double>(n) * std::log1p(x));
}

double
chi2_quadrature(const LowerBoundFamily& fam, const Word& w, std::size_t panels_per_cell)
{
  if (w.size() != fam.word_length())
    throw dimension_error("family word length differs from M^D");
  Field f = [&fam, &w](Point x) {
    const double F = fam.perturbation(w, x);
    return F == 0.0 ? 0.0 : F * F / fam.f0(x);
  };
  return integrate(f, fam.grid_pieces(&w, panels_per_cell), 8);
}

} // namespace mixkde
