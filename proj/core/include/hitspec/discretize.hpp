#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hitspec/model.hpp"

namespace hitspec {

enum class Boundary { Absorbing, Reflecting };

const char* to_string(Boundary b);

// Uniform vertex grid on [lower, upper]. Absorbing endpoints are ghost
// nodes (value 0) and carry no unknown; reflecting endpoints are unknowns
// with a half cell. `nodes` holds the unknowns only.
struct Grid {
  Interval interval;
  Boundary lower = Boundary::Absorbing;
  Boundary upper = Boundary::Absorbing;
  double spacing = 0.0;
  std::vector<double> nodes;

  std::size_t size() const { return nodes.size(); }
};

Grid make_grid(Interval interval, std::size_t unknowns, Boundary lower, Boundary upper);

// Finite-volume generator L = d/dm d/dS in conductance form:
//   (L f)_i = [c_{i+1} (f_{i+1} - f_i) - c_i (f_i - f_{i-1})] / m_i
// with c the inverse scale increments between neighbours. conductances()
// has n + 1 entries; the first and last connect to the ghost nodes and are
// zero on reflecting sides.
class GeneratorMatrix {
 public:
  GeneratorMatrix(Grid grid, std::vector<double> weights, std::vector<double> conductances,
                  std::string model_name);

  std::size_t size() const { return weights_.size(); }
  const Grid& grid() const { return grid_; }
  std::span<const double> nodes() const { return grid_.nodes; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> conductances() const { return conductances_; }
  const std::string& model_name() const { return model_name_; }
  bool killed() const {
    return grid_.lower == Boundary::Absorbing || grid_.upper == Boundary::Absorbing;
  }

  double diagonal(std::size_t i) const;
  // L_{i,i+1} and L_{i+1,i}.
  double upper(std::size_t i) const;
  double lower(std::size_t i) const;

  std::vector<double> apply(std::span<const double> f) const;
  // (f, -L f)_m = sum over edges c_e (df)^2, ghost values zero.
  double dirichlet_energy(std::span<const double> f) const;
  double inner(std::span<const double> f, std::span<const double> g) const;
  double total_mass() const;

  // Symmetric form D^{1/2}(-L)D^{-1/2}: diagonal and (negative) off-diagonal.
  std::vector<double> symmetric_diagonal() const;
  std::vector<double> symmetric_offdiagonal() const;

  // Restriction to the unknowns [first, last) with absorbing sides wherever
  // the cut falls strictly inside this grid. Masses and conductances are
  // inherited unchanged, so energies of the pieces add up exactly.
  GeneratorMatrix restrict_to(std::size_t first, std::size_t last) const;

 private:
  Grid grid_;
  std::vector<double> weights_;
  std::vector<double> conductances_;
  std::string model_name_;
};

GeneratorMatrix build_generator(const DiffusionModel& model, Interval interval,
                                std::size_t unknowns, Boundary lower, Boundary upper);

// Absorbing on both sides: n interior nodes, spacing (b-a)/(n+1).
GeneratorMatrix build_killed_generator(const DiffusionModel& model, Interval interval,
                                       std::size_t n);

// Reflecting on both sides: n nodes including the endpoints; L 1 = 0.
GeneratorMatrix build_reflected_generator(const DiffusionModel& model, Interval interval,
                                          std::size_t n);

// Unknowns needed on `interval` so that the spacing equals `spacing`.
std::size_t unknowns_for_spacing(Interval interval, double spacing, Boundary lower,
                                 Boundary upper);

// The process on [-radius, radius] killed on entering [-inner, inner]:
// [-radius, -inner] reflecting/absorbing and [inner, radius]
// absorbing/reflecting, both with the given spacing.
std::pair<GeneratorMatrix, GeneratorMatrix> build_exterior_generators(const DiffusionModel& model,
                                                                      double inner, double radius,
                                                                      double spacing);

// Splits a generator at unknown `node`: the left piece holds [0, node) and
// the right piece (node, n), each absorbing at the split node.
std::pair<GeneratorMatrix, GeneratorMatrix> split_at_node(const GeneratorMatrix& gen,
                                                          std::size_t node);

}  // namespace hitspec
