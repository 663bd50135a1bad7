#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mixkde {

using Point = std::span<const double>;
using Field = std::function<double(Point)>;
using MultiIndex = std::vector<int>;

//! Axis-aligned box [lower, upper] in R^dim.
class Box
{
public:
  //! The unit interval [0, 1].
  Box();
  Box(std::vector<double> lower, std::vector<double> upper);

  //! Cube [lo, hi]^dim.
  static Box cube(std::size_t dim, double lo, double hi);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double width(std::size_t axis) const { return upper_[axis] - lower_[axis]; }
  double volume() const;
  bool contains(Point x) const;

  //! The box grown by `pad` on every side.
  Box padded(double pad) const;

private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

//! Composite tensor Gauss-Legendre rule: every axis is split into equal
//! panels, each carrying `nodes_per_panel` Gauss nodes.
struct QuadRule
{
  std::size_t nodes_per_panel = 8;
  std::vector<std::size_t> panels_per_axis;

  //! One panel of 8 nodes on a single axis.
  QuadRule();
  QuadRule(std::size_t nodes, std::vector<std::size_t> panels);

  static QuadRule uniform(std::size_t dim, std::size_t panels, std::size_t nodes = 8);

  //! Panels sized so that each panel is no wider than feature_scale / 2.
  static QuadRule for_feature_scale(const Box& box, double feature_scale, std::size_t nodes = 8);

  //! Total number of nodes; throws parameter_error on overflow.
  std::size_t node_count() const;
};

//! A box together with its own panel layout. Used by fields that are known
//! to vary on very different scales in different parts of their support.
struct Piece
{
  Box box;
  std::vector<std::size_t> panels_per_axis;
};

//! Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre
{
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(std::size_t n);

//! Composite nodes/weights along one axis.
void composite_nodes(double lo, double hi, std::size_t panels, std::size_t nodes_per_panel,
                     std::vector<double>& x, std::vector<double>& w);

//! Tensor node set of a composite rule on a box, stored axis by axis.
struct TensorGrid
{
  std::vector<std::vector<double>> nodes;
  std::vector<std::vector<double>> weights;

  TensorGrid(const Box& box, const QuadRule& rule);
  std::size_t dim() const { return nodes.size(); }
  std::size_t size() const;

  //! Calls fn(point, weight, flat_index) for every node, last axis fastest.
  void for_each(const std::function<void(Point, double, std::size_t)>& fn) const;
};

double integrate(const Field& f, const Box& box, const QuadRule& rule);
double integrate(const Field& f, std::span<const Piece> pieces, std::size_t nodes_per_panel);

double lp_norm(const Field& f, const Box& box, double p, const QuadRule& rule);
double lp_norm(const Field& f, std::span<const Piece> pieces, double p, std::size_t nodes_per_panel);

//! Maximum supported total derivative order for finite differences.
inline constexpr int max_fd_order = 6;

//! Nested central differences, one axis at a time in increasing axis order.
double partial_fd(const Field& f, Point point, const MultiIndex& alpha, double step);

//! As above with step 1e-3 * max(1, |x_axis|) on every differentiation level.
double partial_fd(const Field& f, Point point, const MultiIndex& alpha);

int order(const MultiIndex& alpha);

} // namespace mixkde
