#include "wrcouple/fem_assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wrcouple::fem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void require_dim(const MeshSpec& mesh, int dim) {
  if (mesh.dim != dim) {
    throw std::invalid_argument("mesh dimension " + std::to_string(mesh.dim) +
                                " does not match assembler dimension " + std::to_string(dim));
  }
  if (mesh.n_cells < 2) {
    throw std::invalid_argument("mesh needs at least 2 cells per unit length");
  }
}

// Splits a full-node matrix into the four blocks given node -> (block, index) maps.
// kind[k] is 0 for interior, 1 for interface, -1 for eliminated Dirichlet nodes.
struct Partition {
  std::vector<int> kind;
  std::vector<int> local;
  int n_interior = 0;
  int n_interface = 0;
};

std::array<SparseMatrix, 4> split_blocks(const SparseMatrix& full, const Partition& p) {
  std::array<Triplets, 4> t;  // ii, ig, gi, gg
  for (int col = 0; col < full.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(full, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      const int kr = p.kind[r];
      const int kc = p.kind[c];
      if (kr < 0 || kc < 0) continue;
      t[2 * kr + kc].emplace_back(p.local[r], p.local[c], it.value());
    }
  }
  const int si = p.n_interior;
  const int sg = p.n_interface;
  return {from_triplets(si, si, t[0]), from_triplets(si, sg, t[1]),
          from_triplets(sg, si, t[2]), from_triplets(sg, sg, t[3])};
}

SparseMatrix block2x2(const SparseMatrix& ii, const SparseMatrix& ig, const SparseMatrix& gi,
                      const SparseMatrix& gg) {
  const auto si = static_cast<int>(ii.rows());
  const auto sg = static_cast<int>(gg.rows());
  Triplets t;
  t.reserve(ii.nonZeros() + ig.nonZeros() + gi.nonZeros() + gg.nonZeros());
  auto append = [&t](const SparseMatrix& m, int r0, int c0) {
    for (int col = 0; col < m.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
        t.emplace_back(r0 + static_cast<int>(it.row()), c0 + static_cast<int>(it.col()),
                       it.value());
      }
    }
  };
  append(ii, 0, 0);
  append(ig, 0, si);
  append(gi, si, 0);
  append(gg, si, si);
  return from_triplets(si + sg, si + sg, t);
}

}  // namespace

MeshSpec MeshSpec::make(int dim, int n_cells) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("mesh dimension must be 1 or 2");
  }
  if (n_cells < 2) {
    throw std::invalid_argument("mesh needs at least 2 cells per unit length (one interior node)");
  }
  return MeshSpec{dim, n_cells};
}

MeshSpec MeshSpec::from_dx(int dim, double dx) {
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw std::invalid_argument("cell size must be positive");
  }
  const double cells = 1.0 / dx;
  const long rounded = std::lround(cells);
  if (std::abs(cells - static_cast<double>(rounded)) > 1e-9 * cells) {
    throw std::invalid_argument("cell size must divide the unit interval evenly");
  }
  return make(dim, static_cast<int>(rounded));
}

int MeshSpec::interior_count() const {
  const int n = n_cells - 1;
  return dim == 1 ? n : n * n;
}

int MeshSpec::interface_count() const { return dim == 1 ? 1 : n_cells - 1; }

SparseMatrix SubdomainOperator::full_mass() const { return block2x2(m_ii, m_ig, m_gi, m_gg); }

SparseMatrix SubdomainOperator::full_stiffness() const {
  return block2x2(a_ii, a_ig, a_gi, a_gg);
}

SubdomainOperator assemble_1d(const Material& material, const MeshSpec& mesh, Side side) {
  require_dim(mesh, 1);
  // Re-validate in case the caller built the struct by hand.
  const Material mat = Material::make(material.name, material.lambda_cond, material.rho,
                                      material.cp);
  const int n = mesh.interior_count();
  const double dx = mesh.dx();
  const double stiff = mat.lambda_cond / (dx * dx);
  const double mass = mat.alpha / 6.0;

  Triplets a_ii, m_ii;
  for (int i = 0; i < n; ++i) {
    a_ii.emplace_back(i, i, 2.0 * stiff);
    m_ii.emplace_back(i, i, 4.0 * mass);
    if (i + 1 < n) {
      a_ii.emplace_back(i, i + 1, -stiff);
      a_ii.emplace_back(i + 1, i, -stiff);
      m_ii.emplace_back(i, i + 1, mass);
      m_ii.emplace_back(i + 1, i, mass);
    }
  }
  const int coupled = side == Side::left ? n - 1 : 0;

  SubdomainOperator op;
  op.mesh = mesh;
  op.material = mat;
  op.side = side;
  op.a_ii = from_triplets(n, n, a_ii);
  op.m_ii = from_triplets(n, n, m_ii);
  op.a_ig = from_triplets(n, 1, {{coupled, 0, -stiff}});
  op.m_ig = from_triplets(n, 1, {{coupled, 0, mass}});
  op.a_gi = from_triplets(1, n, {{0, coupled, -stiff}});
  op.m_gi = from_triplets(1, n, {{0, coupled, mass}});
  op.a_gg = from_triplets(1, 1, {{0, 0, stiff}});
  op.m_gg = from_triplets(1, 1, {{0, 0, 2.0 * mass}});

  op.interior_nodes.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const double x = side == Side::left ? -1.0 + i * dx : i * dx;
    op.interior_nodes.push_back({x, 0.0});
  }
  op.interface_nodes.push_back({0.0, 0.0});
  return op;
}

UnconstrainedSystem assemble_unconstrained_2d(const Material& material, const MeshSpec& mesh,
                                              Side side) {
  require_dim(mesh, 2);
  const Material mat = Material::make(material.name, material.lambda_cond, material.rho,
                                      material.cp);
  const int n = mesh.n_cells;
  const double h = mesh.dx();
  const double x0 = side == Side::left ? -1.0 : 0.0;
  const int stride = n + 1;
  auto id = [stride](int i, int j) { return j * stride + i; };

  UnconstrainedSystem sys;
  sys.nodes.reserve(static_cast<std::size_t>(stride) * stride);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      sys.nodes.push_back({x0 + i * h, j * h});
    }
  }

  Triplets mass, stiff;
  mass.reserve(static_cast<std::size_t>(n) * n * 18);
  stiff.reserve(static_cast<std::size_t>(n) * n * 18);

  auto add_triangle = [&](std::array<int, 3> v) {
    const Point& p0 = sys.nodes[v[0]];
    const Point& p1 = sys.nodes[v[1]];
    const Point& p2 = sys.nodes[v[2]];
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    const double area = 0.5 * std::abs(det);
    // Gradients of the barycentric basis functions.
    const std::array<std::array<double, 2>, 3> grad = {{
        {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det},
        {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det},
        {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det},
    }};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double k = grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1];
        stiff.emplace_back(v[a], v[b], mat.lambda_cond * area * k);
        mass.emplace_back(v[a], v[b], mat.alpha * area / 12.0 * (a == b ? 2.0 : 1.0));
      }
    }
  };

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ll = id(i, j);
      const int lr = id(i + 1, j);
      const int ur = id(i + 1, j + 1);
      const int ul = id(i, j + 1);
      add_triangle({ll, lr, ur});
      add_triangle({ll, ur, ul});
    }
  }

  const int total = stride * stride;
  sys.mass = from_triplets(total, total, mass);
  sys.stiffness = from_triplets(total, total, stiff);
  return sys;
}

SubdomainOperator assemble_2d(const Material& material, const MeshSpec& mesh, Side side) {
  UnconstrainedSystem sys = assemble_unconstrained_2d(material, mesh, side);
  const int n = mesh.n_cells;
  const int stride = n + 1;
  const int gamma_col = side == Side::left ? n : 0;
  const int outer_col = side == Side::left ? 0 : n;

  Partition p;
  p.kind.assign(sys.nodes.size(), -1);
  p.local.assign(sys.nodes.size(), -1);

  SubdomainOperator op;
  op.mesh = mesh;
  op.material = Material::make(material.name, material.lambda_cond, material.rho, material.cp);
  op.side = side;

  // Interior unknowns in lexicographic (y-major) order.
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i <= n; ++i) {
      if (i == gamma_col || i == outer_col) continue;
      const int k = j * stride + i;
      p.kind[k] = 0;
      p.local[k] = p.n_interior++;
      op.interior_nodes.push_back(sys.nodes[k]);
    }
  }
  // Interface unknowns bottom to top, corners excluded.
  for (int j = 1; j < n; ++j) {
    const int k = j * stride + gamma_col;
    p.kind[k] = 1;
    p.local[k] = p.n_interface++;
    op.interface_nodes.push_back(sys.nodes[k]);
  }

  auto [m_ii, m_ig, m_gi, m_gg] = split_blocks(sys.mass, p);
  auto [a_ii, a_ig, a_gi, a_gg] = split_blocks(sys.stiffness, p);
  op.m_ii = std::move(m_ii);
  op.m_ig = std::move(m_ig);
  op.m_gi = std::move(m_gi);
  op.m_gg = std::move(m_gg);
  op.a_ii = std::move(a_ii);
  op.a_ig = std::move(a_ig);
  op.a_gi = std::move(a_gi);
  op.a_gg = std::move(a_gg);
  return op;
}

SubdomainOperator assemble(const Material& material, const MeshSpec& mesh, Side side) {
  switch (mesh.dim) {
    case 1:
      return assemble_1d(material, mesh, side);
    case 2:
      return assemble_2d(material, mesh, side);
    default:
      throw std::invalid_argument("mesh dimension must be 1 or 2");
  }
}

MonolithicOperator assemble_monolithic(const SubdomainOperator& left,
                                       const SubdomainOperator& right) {
  if (!(left.mesh == right.mesh)) {
    throw std::invalid_argument("subdomain meshes must match to be glued at the interface");
  }
  if (left.side != Side::left || right.side != Side::right) {
    throw std::invalid_argument("monolithic gluing expects a left and a right subdomain");
  }
  if (left.interface_size() != right.interface_size()) {
    throw std::invalid_argument("interface node counts differ");
  }

  MonolithicOperator mono;
  mono.mesh = left.mesh;
  mono.map = NodeMap{left.interior_size(), left.interface_size(), right.interior_size()};
  const int g0 = mono.map.interface_offset();
  const int r0 = mono.map.right_offset();
  const int total = mono.map.size();

  auto glue = [&](const SparseMatrix& l_ii, const SparseMatrix& l_ig, const SparseMatrix& l_gi,
                  const SparseMatrix& l_gg, const SparseMatrix& r_ii, const SparseMatrix& r_ig,
                  const SparseMatrix& r_gi, const SparseMatrix& r_gg) {
    Triplets t;
    auto append = [&t](const SparseMatrix& m, int ro, int co) {
      for (int col = 0; col < m.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
          t.emplace_back(ro + static_cast<int>(it.row()), co + static_cast<int>(it.col()),
                         it.value());
        }
      }
    };
    append(l_ii, 0, 0);
    append(l_ig, 0, g0);
    append(l_gi, g0, 0);
    append(l_gg, g0, g0);
    append(r_gg, g0, g0);  // duplicates are summed by setFromTriplets
    append(r_gi, g0, r0);
    append(r_ig, r0, g0);
    append(r_ii, r0, r0);
    return from_triplets(total, total, t);
  };

  mono.mass = glue(left.m_ii, left.m_ig, left.m_gi, left.m_gg, right.m_ii, right.m_ig,
                   right.m_gi, right.m_gg);
  mono.stiffness = glue(left.a_ii, left.a_ig, left.a_gi, left.a_gg, right.a_ii, right.a_ig,
                        right.a_gi, right.a_gg);

  mono.nodes.reserve(total);
  mono.nodes.insert(mono.nodes.end(), left.interior_nodes.begin(), left.interior_nodes.end());
  mono.nodes.insert(mono.nodes.end(), left.interface_nodes.begin(), left.interface_nodes.end());
  mono.nodes.insert(mono.nodes.end(), right.interior_nodes.begin(), right.interior_nodes.end());
  return mono;
}

MonolithicOperator assemble_monolithic(const Material& left, const Material& right,
                                       const MeshSpec& mesh) {
  return assemble_monolithic(assemble(left, mesh, Side::left),
                             assemble(right, mesh, Side::right));
}

}  // namespace wrcouple::fem
