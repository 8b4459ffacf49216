#pragma once

#include "hdg_biot/basis.hpp"
#include "hdg_biot/mesh.hpp"
#include "hdg_biot/params.hpp"
#include "hdg_biot/spaces.hpp"

#include <array>
#include <set>
#include <span>
#include <vector>

namespace hdg {

/// Basis tables on the reference cell and on every possible facet embedding.
///
/// Cell unknowns use the P_k cell basis; P_{k-1} fields use its leading
/// columns. Facet tables are cached per (local vertex correspondence), so
/// the physical facet parametrisation (sorted global vertices) is shared by
/// both adjacent cells.
class ReferenceElement {
 public:
  struct Trace {
    Mat values;                 // nq x n cell basis at the facet quadrature points
    std::vector<Mat> gradients; // per point, n x dim reference gradients
    Mat source_values;          // cell basis at the higher-order facet rule
  };

  ReferenceElement(int dim, int k);

  int dim() const { return dim_; }
  int k() const { return k_; }
  int n() const { return n_; }    // dim P_k(K)
  int np() const { return np_; }  // dim P_{k-1}(K)
  int m() const { return m_; }    // dim P_k(F)

  const QuadratureRule& cell_rule() const { return cell_rule_; }
  const QuadratureRule& cell_source_rule() const { return cell_source_rule_; }
  const QuadratureRule& facet_rule() const { return facet_rule_; }
  const QuadratureRule& facet_source_rule() const { return facet_source_rule_; }

  const Mat& cell_values() const { return cell_values_; }
  const std::vector<Mat>& cell_gradients() const { return cell_gradients_; }
  const Mat& cell_source_values() const { return cell_source_values_; }
  const Mat& facet_values() const { return facet_values_; }
  const Mat& facet_source_values() const { return facet_source_values_; }

  /// Facet vertex j sits at cell-local vertex local_vertices[j].
  const Trace& trace(std::span<const int> local_vertices) const;

 private:
  int dim_, k_, n_, np_, m_;
  BasisSet cell_basis_, facet_basis_;
  QuadratureRule cell_rule_, cell_source_rule_, facet_rule_, facet_source_rule_;
  Mat cell_values_, cell_source_values_, facet_values_, facet_source_values_;
  std::vector<Mat> cell_gradients_;
  std::vector<Trace> traces_;  // indexed by sum_j local_vertices[j] * (dim+1)^j
};

/// Parameter-free facet integrals of one cell; facet quadrature uses the
/// facet's own parametrisation.
struct FacetIntegrals {
  int facet = -1;
  double h = 0.0;            // diameter of the owning cell
  double area = 0.0;
  Point normal = Point::Zero();  // outward
  bool boundary = false;
  int marker = 0;
  Mat Tuu;  // (phi_i, phi_j)_F, n x n
  Mat Tut;  // (phi_i, chi_l)_F, n x m
  Mat Ttt;  // (chi_l, chi_r)_F, m x m
  Mat Eu;   // (phi_i e_a, eps(phi_j e_b) n)_F, dn x dn
  Mat Et;   // (chi_l e_a, eps(phi_j e_b) n)_F, dm x dn
  Mat Bt;   // (chi_l, phi_j n_b)_F, m x dn
  Mat Np;   // (psi_i, grad psi_j . n)_F, np x np
  Mat Npt;  // (chi_l, grad psi_j . n)_F, m x np
};

/// Parameter-free cell integrals. Vector-valued indices are a * n + i.
struct CellIntegrals {
  int cell = -1;
  double volume = 0.0;
  double h = 0.0;
  Mat M;     // (phi_i, phi_j)_K, n x n
  Mat Keps;  // (eps(phi_i e_a), eps(phi_j e_b))_K, dn x dn
  Mat G;     // (grad psi_i, grad psi_j)_K, np x np
  Mat B;     // (psi_i, d_b phi_j)_K, np x dn
  std::array<FacetIntegrals, 4> facets;
  int num_facets = 0;
};

CellIntegrals compute_cell_integrals(const ReferenceElement& ref, const Mesh& mesh, int cell,
                                     CellLength length = CellLength::volume);

/// d_h on one cell over [u (dn) | ubar (num_facets * d * m)]; with
/// symmetric_interior = false only the stabilised energy
/// mu (eps, eps) + mu eta <h^-1 (u - ubar), v - vbar> remains.
Mat local_elasticity(const CellIntegrals& ci, int dim, double mu, double eta, bool symmetric_interior = true);

/// b_h(v, q) on one cell: rows [v (dn) | vbar], columns [q (np) | qbar (num_facets * m)].
/// On boundary facets the trace pairing is <qbar, (v - vbar).n>, which equals
/// <qbar, v.n> whenever vbar vanishes there; vbar rows of interior facets stay zero.
Mat local_divergence(const CellIntegrals& ci, int dim, int np, int m);

/// Scalar diffusion on [p (np) | pbar] with reaction r:
/// kappa (grad p, grad q) + kappa eta <h^-1 (p - pbar), q - qbar> + r (p, q)
/// plus the symmetric interior terms when symmetric_interior.
Mat local_diffusion(const CellIntegrals& ci, int np, int m, double kappa, double reaction, double eta,
                    bool symmetric_interior);

/// Layout of the local Biot system of one cell:
/// cell part [u | pT | z | p] followed by trace part [ubar | pTbar | pbar],
/// each trace field ordered facet-major.
struct LocalLayout {
  int dim = 2, n = 0, np = 0, m = 0, facets = 3;
  int cell_size() const { return 2 * dim * n + 2 * np; }
  int trace_size() const { return facets * (dim * m + 2 * m); }
  int size() const { return cell_size() + trace_size(); }
  int u() const { return 0; }
  int pT() const { return dim * n; }
  int z() const { return dim * n + np; }
  int p() const { return 2 * dim * n + np; }
  int ubar() const { return cell_size(); }
  int pTbar() const { return cell_size() + facets * dim * m; }
  int pbar() const { return pTbar() + facets * m; }
  static LocalLayout of(const ReferenceElement& ref);
};

/// Right-hand side data. Missing functions contribute nothing.
struct Loads {
  FieldFunction body_force;  // f, vector valued
  FieldFunction source;      // g, component 0
  FieldFunction traction;    // prescribed traction on traction-tagged facets
  Vec source_coefficients;   // extra source in Q_h, in the p-field dof layout
};

/// Local matrix of a_h on one cell (EDG basis change not applied).
Mat local_biot_matrix(const CellIntegrals& ci, const LocalLayout& layout, const ModelParams& params);

/// Local load (f, v) - (g, q) + <t, vbar>_traction.
Vec local_biot_load(const ReferenceElement& ref, const Mesh& mesh, const CellIntegrals& ci,
                    const LocalLayout& layout, const Loads& loads, const std::set<int>& traction_markers);

enum class PcVariant { P, Phat };

/// Diagonal blocks of the preconditioner on one cell.
struct LocalPreconditioner {
  Mat u;   // [u | ubar]
  Mat pT;  // [pT | pTbar]
  Mat z;   // [z]
  Mat p;   // [p | pbar]
};

LocalPreconditioner local_preconditioner(const CellIntegrals& ci, const LocalLayout& layout,
                                         const ModelParams& params, PcVariant variant);

/// Global dofs (within their field) of the trace part of a cell, in local
/// order, per trace field.
std::vector<int> cell_trace_dofs(const Mesh& mesh, const DofMap& map, int cell);

/// Applies the EDG nodal basis change to the rows and columns of a
/// facet-major vector trace block starting at `offset`.
void apply_basis_change(Mat& A, int offset, int facets, int components, const Mat& C);
void apply_basis_change(Vec& F, int offset, int facets, int components, const Mat& C);

}  // namespace hdg
