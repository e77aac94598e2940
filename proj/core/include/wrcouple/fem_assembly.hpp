#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "wrcouple/material.hpp"

namespace wrcouple::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Point = std::array<double, 2>;

/// Which half of the domain a subdomain occupies. Left is [-1, 0] (x [0, 1]
/// in 2D), right is [0, 1] (x [0, 1]); the interface sits at x = 0.
enum class Side { left, right };

/// Uniform mesh of a unit-length subdomain: `n_cells` cells per unit length.
struct MeshSpec {
  int dim = 1;
  int n_cells = 2;

  /// Throws std::invalid_argument for dim not in {1, 2} or n_cells < 2.
  static MeshSpec make(int dim, int n_cells);
  /// Builds from a cell size; rejects sizes that are not 1/integer.
  static MeshSpec from_dx(int dim, double dx);

  [[nodiscard]] double dx() const { return 1.0 / n_cells; }
  /// Unknowns strictly inside the subdomain (S_m).
  [[nodiscard]] int interior_count() const;
  /// Unknowns on the interface, corners excluded in 2D (s).
  [[nodiscard]] int interface_count() const;

  friend bool operator==(const MeshSpec&, const MeshSpec&) = default;
};

/// Mass and stiffness blocks of one subdomain, partitioned into interior (I)
/// and interface (G) unknowns.
struct SubdomainOperator {
  MeshSpec mesh;
  Material material;
  Side side = Side::left;

  SparseMatrix m_ii, a_ii;  // S x S
  SparseMatrix m_ig, a_ig;  // S x s
  SparseMatrix m_gi, a_gi;  // s x S
  SparseMatrix m_gg, a_gg;  // s x s

  std::vector<Point> interior_nodes;
  std::vector<Point> interface_nodes;

  [[nodiscard]] int interior_size() const { return static_cast<int>(m_ii.rows()); }
  [[nodiscard]] int interface_size() const { return static_cast<int>(m_gg.rows()); }

  /// 2x2 block matrices [[II, IG], [GI, GG]] over (interior, interface).
  [[nodiscard]] SparseMatrix full_mass() const;
  [[nodiscard]] SparseMatrix full_stiffness() const;
};

/// P1 system over every node of a subdomain mesh, before boundary conditions.
struct UnconstrainedSystem {
  SparseMatrix mass;
  SparseMatrix stiffness;
  std::vector<Point> nodes;
};

/// Closed-form 1D blocks on N+1 cells; the matrices carry the 1/dx scaling
/// of the classical tridiagonal forms (stiffness lambda/dx^2, mass alpha/6).
SubdomainOperator assemble_1d(const Material& material, const MeshSpec& mesh, Side side);

/// Structured P1 assembly on the unit square; every quad is split along its
/// lower-left to upper-right diagonal. Homogeneous Dirichlet nodes on the
/// outer boundary (including both ends of the interface edge) are eliminated.
SubdomainOperator assemble_2d(const Material& material, const MeshSpec& mesh, Side side);

/// Dispatches on mesh.dim.
SubdomainOperator assemble(const Material& material, const MeshSpec& mesh, Side side);

/// Full-node 2D P1 matrices (no Dirichlet elimination).
UnconstrainedSystem assemble_unconstrained_2d(const Material& material, const MeshSpec& mesh,
                                              Side side);

/// Index ranges of the glued operator, ordered (left interior, interface, right interior).
struct NodeMap {
  int left_interior = 0;
  int interface = 0;
  int right_interior = 0;

  [[nodiscard]] int interface_offset() const { return left_interior; }
  [[nodiscard]] int right_offset() const { return left_interior + interface; }
  [[nodiscard]] int size() const { return left_interior + interface + right_interior; }
};

struct MonolithicOperator {
  MeshSpec mesh;
  SparseMatrix mass;
  SparseMatrix stiffness;
  NodeMap map;
  std::vector<Point> nodes;
};

/// Glues two conforming subdomain operators: interface rows are the sum of
/// both interface contributions.
MonolithicOperator assemble_monolithic(const SubdomainOperator& left,
                                       const SubdomainOperator& right);
MonolithicOperator assemble_monolithic(const Material& left, const Material& right,
                                       const MeshSpec& mesh);

}  // namespace wrcouple::fem
