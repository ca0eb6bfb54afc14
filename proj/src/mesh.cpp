#include "morley/mesh.h"

#include <stdexcept>
#include <string>

using namespace morley;

namespace
{
constexpr std::array<LocalFacet, 4> facets_2d{{{1, -1}, {0, 1}, {1, 1}, {0, -1}}};
constexpr std::array<LocalFacet, 6> facets_3d{
    {{0, 1}, {1, 1}, {2, 1}, {0, -1}, {1, -1}, {2, -1}}};

int ipow(int base, int exp)
{
  int r = 1;
  for (int i = 0; i < exp; ++i)
    r *= base;
  return r;
}

// Lexicographic linear index with x1 fastest.
int linear(const LatticeIndex& ijk, const LatticeIndex& extent, int dim)
{
  int id = 0;
  for (int a = dim - 1; a >= 0; --a)
  {
    if (ijk[a] < 0 || ijk[a] >= extent[a])
      throw std::out_of_range("lattice index out of range");
    id = id * extent[a] + ijk[a];
  }
  return id;
}

LatticeIndex delinear(int id, const LatticeIndex& extent, int dim)
{
  LatticeIndex ijk{0, 0, 0};
  for (int a = 0; a < dim; ++a)
  {
    ijk[a] = id % extent[a];
    id /= extent[a];
  }
  return ijk;
}

LatticeIndex uniform_extent(int dim, int m)
{
  LatticeIndex e{1, 1, 1};
  for (int a = 0; a < dim; ++a)
    e[a] = m;
  return e;
}

LatticeIndex facet_extent(int dim, int n, int axis)
{
  LatticeIndex e = uniform_extent(dim, n);
  e[axis] = n + 1;
  return e;
}
} // namespace

//-----------------------------------------------------------------------------
void GridSpec::validate() const
{
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("grid dimension must be 2 or 3, got "
                                + std::to_string(dim));
  if (n < 1)
    throw std::invalid_argument("cells per axis must be >= 1, got "
                                + std::to_string(n));
  for (int a = 0; a < dim; ++a)
  {
    if (!(extent[a] > 0.0))
      throw std::invalid_argument("grid extent must be positive");
    if (extent[a] != extent[0])
      throw std::invalid_argument(
          "grid extents must be equal on every axis (square/cubic cells)");
  }
}
//-----------------------------------------------------------------------------
std::span<const LocalFacet> morley::local_facets(int dim)
{
  if (dim == 2)
    return facets_2d;
  if (dim == 3)
    return facets_3d;
  throw std::invalid_argument("dimension must be 2 or 3");
}
//-----------------------------------------------------------------------------
Point morley::reference_vertex(int dim, int v)
{
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a)
    p[a] = ((v >> a) & 1) ? 1.0 : -1.0;
  return p;
}
//-----------------------------------------------------------------------------
StructuredMesh::StructuredMesh(const GridSpec& spec) : _spec(spec)
{
  _spec.validate();
  const int d = _spec.dim;
  const int n = _spec.n;
  for (int a = d; a < 3; ++a)
  {
    _spec.origin[a] = 0.0;
    _spec.extent[a] = 0.0;
  }
  _side = _spec.extent[0] / n;
  _num_cells = ipow(n, d);
  _num_vertices = ipow(n + 1, d);
  _facet_offset[0] = 0;
  for (int a = 0; a < d; ++a)
    _facet_offset[a + 1] = _facet_offset[a] + (n + 1) * ipow(n, d - 1);
  for (int a = d + 1; a < 4; ++a)
    _facet_offset[a] = _facet_offset[d];

  const int nv = vertices_per_cell();
  const int nf = facets_per_cell();
  const auto facets = local_facets(d);
  _cell_vertices.resize(static_cast<std::size_t>(_num_cells) * nv);
  _cell_facets.resize(static_cast<std::size_t>(_num_cells) * nf);
  for (int c = 0; c < _num_cells; ++c)
  {
    const LatticeIndex ijk = cell_index(c);
    for (int v = 0; v < nv; ++v)
    {
      LatticeIndex vi = ijk;
      for (int a = 0; a < d; ++a)
        vi[a] += (v >> a) & 1;
      _cell_vertices[static_cast<std::size_t>(c) * nv + v] = vertex_id(vi);
    }
    for (int f = 0; f < nf; ++f)
    {
      LatticeIndex fi = ijk;
      if (facets[f].side > 0)
        ++fi[facets[f].axis];
      _cell_facets[static_cast<std::size_t>(c) * nf + f]
          = facet_id(facets[f].axis, fi);
    }
  }
}
//-----------------------------------------------------------------------------
int StructuredMesh::cell_id(const LatticeIndex& ijk) const
{
  return linear(ijk, uniform_extent(dim(), n()), dim());
}
//-----------------------------------------------------------------------------
LatticeIndex StructuredMesh::cell_index(int cell) const
{
  return delinear(cell, uniform_extent(dim(), n()), dim());
}
//-----------------------------------------------------------------------------
int StructuredMesh::vertex_id(const LatticeIndex& ijk) const
{
  return linear(ijk, uniform_extent(dim(), n() + 1), dim());
}
//-----------------------------------------------------------------------------
LatticeIndex StructuredMesh::vertex_index(int vertex) const
{
  return delinear(vertex, uniform_extent(dim(), n() + 1), dim());
}
//-----------------------------------------------------------------------------
int StructuredMesh::facet_id(int axis, const LatticeIndex& ijk) const
{
  return _facet_offset[axis] + linear(ijk, facet_extent(dim(), n(), axis), dim());
}
//-----------------------------------------------------------------------------
int StructuredMesh::facet_axis(int facet) const
{
  for (int a = 0; a < dim(); ++a)
    if (facet < _facet_offset[a + 1])
      return a;
  throw std::out_of_range("facet id out of range");
}
//-----------------------------------------------------------------------------
LatticeIndex StructuredMesh::facet_index(int facet) const
{
  const int a = facet_axis(facet);
  return delinear(facet - _facet_offset[a], facet_extent(dim(), n(), a), dim());
}
//-----------------------------------------------------------------------------
Point StructuredMesh::vertex_coords(int vertex) const
{
  const LatticeIndex ijk = vertex_index(vertex);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim(); ++a)
    x[a] = _spec.origin[a] + _side * ijk[a];
  return x;
}
//-----------------------------------------------------------------------------
Point StructuredMesh::cell_center(int cell) const
{
  const LatticeIndex ijk = cell_index(cell);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim(); ++a)
    x[a] = _spec.origin[a] + _side * (ijk[a] + 0.5);
  return x;
}
//-----------------------------------------------------------------------------
Point StructuredMesh::to_physical(int cell, const Point& xi) const
{
  Point x = cell_center(cell);
  for (int a = 0; a < dim(); ++a)
    x[a] += half() * xi[a];
  return x;
}
//-----------------------------------------------------------------------------
bool StructuredMesh::vertex_on_boundary(int vertex) const
{
  const LatticeIndex ijk = vertex_index(vertex);
  for (int a = 0; a < dim(); ++a)
    if (ijk[a] == 0 || ijk[a] == n())
      return true;
  return false;
}
//-----------------------------------------------------------------------------
bool StructuredMesh::facet_on_boundary(int facet) const
{
  const int a = facet_axis(facet);
  const LatticeIndex ijk = facet_index(facet);
  return ijk[a] == 0 || ijk[a] == n();
}
//-----------------------------------------------------------------------------
std::span<const int> StructuredMesh::cell_vertices(int cell) const
{
  const std::size_t nv = vertices_per_cell();
  return std::span<const int>(_cell_vertices).subspan(cell * nv, nv);
}
//-----------------------------------------------------------------------------
std::span<const int> StructuredMesh::cell_facets(int cell) const
{
  const std::size_t nf = facets_per_cell();
  return std::span<const int>(_cell_facets).subspan(cell * nf, nf);
}
//-----------------------------------------------------------------------------
StructuredMesh morley::build_uniform_mesh(const GridSpec& spec)
{
  return StructuredMesh(spec);
}
//-----------------------------------------------------------------------------
DofMap::DofMap(const StructuredMesh& mesh)
    : _mesh(&mesh), _num_vertices(mesh.num_vertices())
{
  const int total = mesh.num_vertices() + mesh.num_facets();
  _free_index.assign(total, -1);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (!mesh.vertex_on_boundary(v))
    {
      _free_index[vertex_dof(v)] = static_cast<int>(_free_dofs.size());
      _free_dofs.push_back(vertex_dof(v));
    }
  for (int f = 0; f < mesh.num_facets(); ++f)
    if (!mesh.facet_on_boundary(f))
    {
      _free_index[facet_dof(f)] = static_cast<int>(_free_dofs.size());
      _free_dofs.push_back(facet_dof(f));
    }

  _scaling.assign(mesh.vertices_per_cell(), 1.0);
  for (const LocalFacet& lf : local_facets(mesh.dim()))
    _scaling.push_back(lf.side * mesh.half());
}
//-----------------------------------------------------------------------------
Point DofMap::facet_normal(int facet) const
{
  Point nrm{0.0, 0.0, 0.0};
  nrm[_mesh->facet_axis(facet)] = 1.0;
  return nrm;
}
//-----------------------------------------------------------------------------
std::vector<int> DofMap::cell_dofs(int cell) const
{
  std::vector<int> dofs;
  dofs.reserve(_scaling.size());
  for (int v : _mesh->cell_vertices(cell))
    dofs.push_back(vertex_dof(v));
  for (int f : _mesh->cell_facets(cell))
    dofs.push_back(facet_dof(f));
  return dofs;
}
//-----------------------------------------------------------------------------
DofMap morley::build_dof_map(const StructuredMesh& mesh) { return DofMap(mesh); }
//-----------------------------------------------------------------------------
MacroGrid::MacroGrid(const StructuredMesh& mesh) : _dim(mesh.dim())
{
  if (mesh.n() % 3 != 0)
    throw std::invalid_argument("postprocessing requires 3 | N (got N="
                                + std::to_string(mesh.n()) + ")");
  _blocks_per_axis = mesh.n() / 3;
  _num_blocks = ipow(_blocks_per_axis, _dim);
  const int nz = ipow(4, _dim);
  const int nc = ipow(3, _dim);
  _macro_vertices.reserve(static_cast<std::size_t>(_num_blocks) * nz);
  _cells.reserve(static_cast<std::size_t>(_num_blocks) * nc);
  _block_of_cell.assign(mesh.num_cells(), -1);
  for (int b = 0; b < _num_blocks; ++b)
  {
    const LatticeIndex o = block_origin(b);
    for (int z = 0; z < nz; ++z)
    {
      LatticeIndex vi = o;
      for (int a = 0; a < _dim; ++a)
        vi[a] += (z / ipow(4, a)) % 4;
      _macro_vertices.push_back(mesh.vertex_id(vi));
    }
    for (int k = 0; k < nc; ++k)
    {
      LatticeIndex ci = o;
      for (int a = 0; a < _dim; ++a)
        ci[a] += (k / ipow(3, a)) % 3;
      const int c = mesh.cell_id(ci);
      _cells.push_back(c);
      _block_of_cell[c] = b;
    }
  }
}
//-----------------------------------------------------------------------------
LatticeIndex MacroGrid::block_origin(int block) const
{
  LatticeIndex o = delinear(block, uniform_extent(_dim, _blocks_per_axis), _dim);
  for (int a = 0; a < _dim; ++a)
    o[a] *= 3;
  return o;
}
//-----------------------------------------------------------------------------
std::span<const int> MacroGrid::macro_vertices(int block) const
{
  const std::size_t nz = ipow(4, _dim);
  return std::span<const int>(_macro_vertices).subspan(block * nz, nz);
}
//-----------------------------------------------------------------------------
std::span<const int> MacroGrid::block_cells(int block) const
{
  const std::size_t nc = ipow(3, _dim);
  return std::span<const int>(_cells).subspan(block * nc, nc);
}
//-----------------------------------------------------------------------------
MacroGrid morley::macro_partition(const StructuredMesh& mesh)
{
  return MacroGrid(mesh);
}
