#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace morley
{

/// Physical or reference point. Unused trailing components are zero.
using Point = std::array<double, 3>;

/// Lattice index (i, j, k); unused trailing components are zero.
using LatticeIndex = std::array<int, 3>;

/// Uniform axis-aligned grid of n^dim square/cubic cells.
struct GridSpec
{
  int dim = 2;
  int n = 1;
  Point origin{0.0, 0.0, 0.0};
  Point extent{1.0, 1.0, 1.0};

  /// Throws std::invalid_argument if the grid cannot be built.
  void validate() const;
};

/// Codim-1 entity of a cell in local order: its normal axis and the side
/// (+1/-1) of the cell it sits on.
struct LocalFacet
{
  int axis;
  int side;
};

/// Local facet order of a cell.
///
/// 2D: e1 bottom, e2 right, e3 top, e4 left.
/// 3D: F1, F2, F3 on the + side of x1, x2, x3; F4, F5, F6 on the - side,
/// so (F1,F4), (F2,F5), (F3,F6) are the opposite pairs.
std::span<const LocalFacet> local_facets(int dim);

/// Local vertex `v` of the reference cell [-1,1]^dim, lexicographic with
/// x1 fastest.
Point reference_vertex(int dim, int v);

/// Uniform structured mesh with lexicographic enumeration of cells,
/// vertices and codim-1 entities ("facets": edges in 2D, faces in 3D).
///
/// Facets are grouped by normal axis; within an axis group the lattice
/// index has range n+1 along the normal and n along the other axes.
class StructuredMesh
{
public:
  explicit StructuredMesh(const GridSpec& spec);

  const GridSpec& spec() const { return _spec; }
  int dim() const { return _spec.dim; }
  int n() const { return _spec.n; }

  /// Cell side length s.
  double side() const { return _side; }
  /// Half side h★ = s/2, the scale of the reference map.
  double half() const { return 0.5 * _side; }

  int num_cells() const { return _num_cells; }
  int num_vertices() const { return _num_vertices; }
  int num_facets() const { return _facet_offset[_spec.dim]; }
  int vertices_per_cell() const { return 1 << _spec.dim; }
  int facets_per_cell() const { return 2 * _spec.dim; }

  int cell_id(const LatticeIndex& ijk) const;
  LatticeIndex cell_index(int cell) const;
  int vertex_id(const LatticeIndex& ijk) const;
  LatticeIndex vertex_index(int vertex) const;
  int facet_id(int axis, const LatticeIndex& ijk) const;
  int facet_axis(int facet) const;
  LatticeIndex facet_index(int facet) const;

  Point vertex_coords(int vertex) const;
  Point cell_center(int cell) const;
  /// x = center + h★ ξ.
  Point to_physical(int cell, const Point& xi) const;

  bool vertex_on_boundary(int vertex) const;
  bool facet_on_boundary(int facet) const;

  /// Global vertex ids of a cell in reference_vertex order.
  std::span<const int> cell_vertices(int cell) const;
  /// Global facet ids of a cell in local_facets order.
  std::span<const int> cell_facets(int cell) const;

private:
  GridSpec _spec;
  double _side;
  int _num_cells;
  int _num_vertices;
  std::array<int, 4> _facet_offset{};
  std::vector<int> _cell_vertices;
  std::vector<int> _cell_facets;
};

StructuredMesh build_uniform_mesh(const GridSpec& spec);

/// Global numbering of the Morley degrees of freedom: one per vertex
/// (value) followed by one per facet (mean derivative along the +axis
/// normal of that facet). Boundary vertices and facets are constrained.
class DofMap
{
public:
  explicit DofMap(const StructuredMesh& mesh);

  int num_dofs() const { return static_cast<int>(_free_index.size()); }
  int num_free() const { return static_cast<int>(_free_dofs.size()); }

  int vertex_dof(int vertex) const { return vertex; }
  int facet_dof(int facet) const { return _num_vertices + facet; }

  bool constrained(int dof) const { return _free_index[dof] < 0; }
  /// Position of `dof` among the free DOFs, or -1 if constrained.
  int free_index(int dof) const { return _free_index[dof]; }
  std::span<const int> free_dofs() const { return _free_dofs; }

  /// Unit normal (+axis) carried by a facet DOF.
  Point facet_normal(int facet) const;

  /// Global DOFs of a cell: vertices then facets in local order.
  std::vector<int> cell_dofs(int cell) const;

  /// Factors converting global DOF values of a cell into the DOF values
  /// of the reference element: 1 for vertices, side*h★ for facets (the
  /// side flips the fixed global normal to the outward one, h★ maps
  /// physical to reference derivatives).
  std::vector<double> reference_scaling() const { return _scaling; }

private:
  const StructuredMesh* _mesh;
  int _num_vertices;
  std::vector<int> _free_index;
  std::vector<int> _free_dofs;
  std::vector<double> _scaling;
};

DofMap build_dof_map(const StructuredMesh& mesh);

/// Partition of the mesh into disjoint blocks of 3^dim cells.
class MacroGrid
{
public:
  /// Throws std::invalid_argument unless 3 divides n.
  explicit MacroGrid(const StructuredMesh& mesh);

  int dim() const { return _dim; }
  int num_blocks() const { return _num_blocks; }
  /// Lattice index of the block's lower corner cell.
  LatticeIndex block_origin(int block) const;
  /// The 4^dim macro vertices Z of a block, lexicographic with x1 fastest.
  std::span<const int> macro_vertices(int block) const;
  /// Cells of a block, lexicographic with x1 fastest.
  std::span<const int> block_cells(int block) const;
  int block_of_cell(int cell) const { return _block_of_cell[cell]; }

private:
  int _dim;
  int _blocks_per_axis;
  int _num_blocks;
  std::vector<int> _macro_vertices;
  std::vector<int> _cells;
  std::vector<int> _block_of_cell;
};

MacroGrid macro_partition(const StructuredMesh& mesh);

} // namespace morley
