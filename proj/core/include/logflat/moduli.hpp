#pragma once

// The finite moduli model at eigenvalue 0: connections C beta + N alpha0 with
// C in U_0^1 and N in U_0^0, their curvature V(N) + [C, N], residues, the
// gauge action, normalization of C into H^1(U_0), Maurer-Cartan checks for
// points and parametric families, the reduced model Q(A) and tangent
// complexes.

#include "logflat/hpt.hpp"
#include "logflat/liecore.hpp"
#include "logflat/linalg.hpp"
#include "logflat/logdgla.hpp"
#include "logflat/parampoly.hpp"
#include "logflat/polymatrix.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace logflat {

/// C is the beta coefficient, N the alpha0 coefficient.
struct ConnectionElement {
    PolyMatrix C;
    PolyMatrix N;

    static ConnectionElement zero(std::size_t n) { return {PolyMatrix(n), PolyMatrix(n)}; }
    friend bool operator==(const ConnectionElement&, const ConnectionElement&) = default;
};

/// Throws std::invalid_argument unless C lies in U_0^1 and N in U_0^0.
void validate_connection(const ConnectionElement& w, const U0Complex& u0, std::size_t n);

ConnectionElement connection_from_coordinates(const U0Complex& u0, const Vector& c, const Vector& n_coords,
                                              std::size_t n);

/// A = S + N0 with N0 nilpotent, commuting with S.
struct ResidueDatum {
    LieMatrix A;
    SemisimpleData S;
    LieMatrix N0;

    /// Throws InputError if N0 is not nilpotent or not supported on the
    /// centralizer of S.
    static ResidueDatum make(const SemisimpleData& s, const LieMatrix& n0);
    static ResidueDatum semisimple(const SemisimpleData& s);
};

/// g = exp(u_m) ... exp(u_1) g0 with g0 in G_S and each u_k a homogeneous
/// element of U_0^0 of positive weight.
struct GaugeWord {
    LieMatrix g0;
    std::vector<PolyMatrix> factors;

    static GaugeWord identity(std::size_t n);
    PolyMatrix evaluate() const;
    PolyMatrix evaluate_inverse() const;
};

/// Throws std::invalid_argument for a malformed word.
void validate_gauge_word(const GaugeWord& g, const DglaContext& ctx);

/// V(N) + [C, N], the beta^alpha0 coefficient of the curvature.
PolyMatrix curvature(const ConnectionElement& w, const CurveParams& params);
/// The same in U_0^1 coordinates.
Vector curvature_vector(const ConnectionElement& w, const U0Complex& u0, const CurveParams& params);

/// Bilinear part of the curvature in U_0 coordinates:
/// curvature_m = sum_l V(m, l) N_l + sum_{k,l} T[m](k, l) C_k N_l.
struct CurvatureTensor {
    Matrix linear;             // dim U_0^1 x dim U_0^0
    std::vector<Matrix> quad;  // one dim U_0^1 x dim U_0^0 matrix per output row
};

CurvatureTensor curvature_tensor(const U0Complex& u0, const DglaContext& ctx);

/// N(0).
LieMatrix residue(const ConnectionElement& w);
/// N(0) is nilpotent and conjugate to N0 under G_S (blockwise Jordan types).
bool in_WA(const ConnectionElement& w, const ResidueDatum& rd);

/// g * (C, N) = (g C g^-1 - V(g) g^-1, g N g^-1). Throws TruncationOverflow
/// if an intermediate product carries weight above ctx.w_max.
ConnectionElement gauge_act(const GaugeWord& g, const ConnectionElement& w, const DglaContext& ctx);
ConnectionElement gauge_act(const PolyMatrix& g, const PolyMatrix& g_inv, const ConnectionElement& w,
                            const DglaContext& ctx);

struct NormalizationResult {
    PolyMatrix gamma;  // normalized beta coefficient
    GaugeWord word;    // word * (gamma_in, 0) = (gamma, 0)
    bool in_H1 = false;
    /// "already normal", "weight sweep", "weight sweep with linearized correction", or "failed".
    std::string method;
    std::size_t sweep_steps = 0;
    std::size_t correction_rounds = 0;
};

/// Weight-by-weight elimination of the image part of gamma using the
/// contracting homotopy of U_0, followed by Newton rounds on the positive
/// weight part of U_0^0 when lower weights of gamma feed back into higher ones.
NormalizationResult normalize_to_H1(const PolyMatrix& gamma, const DglaContext& ctx,
                                    std::size_t max_correction_rounds = 16);

/// True when (id - a b) gamma = 0 for the U_0 contraction.
bool in_H1(const PolyMatrix& gamma, const U0Contraction& uc);

struct MCReport {
    std::vector<std::string> labels;  // U_0^1 basis of the curvature
    Vector residual;
    bool flat = false;
    LieMatrix residue;
    bool residue_nilpotent = false;
    bool in_WA = false;
};

MCReport mc_verify(const ConnectionElement& w, const ResidueDatum& rd, const DglaContext& ctx);

/// A family assigns a parameter expression to U_0 basis labels, e.g.
/// C["y*E21"] = "110/s", N["x*y^3*E13"] = "-2*s*n". Missing labels are zero.
struct ParamFamily {
    std::map<std::string, std::string> C;
    std::map<std::string, std::string> N;
};

struct FamilyReport {
    bool identically_zero = false;
    /// Nonzero residual rows, by U_0^1 label.
    std::map<std::string, ParamPoly> residuals;
};

/// Exact symbolic check of curvature = 0. Throws InputError for unknown labels
/// or malformed expressions.
FamilyReport mc_family_verify(const ParamFamily& family, const DglaContext& ctx);

/// The member of a family at the given parameter values. A family without
/// parameters is a single connection. Throws InputError for unknown labels,
/// malformed expressions, missing parameters or a vanishing denominator.
ConnectionElement family_point(const ParamFamily& family, const std::map<std::string, Rational>& values,
                               const DglaContext& ctx);

/// Q(A) = H^1(U_0) x d chi^-1(G_S * N0) with F_S(C, N) = [C, N].
struct QAData {
    std::vector<std::string> h1_labels;
    std::vector<std::string> h0_labels;
    SupportPattern parabolic;
    SupportPattern levi;
    std::vector<IndexPair> nilradical;
    LieMatrix N0;
    JordanType orbit_type;
    /// F_S[m](k, l) = coefficient of H^1 class m in [H^1 class k, H^0 class l].
    std::vector<Matrix> F_S;
};

QAData qa_data(const ResidueDatum& rd, const DglaContext& ctx);

/// A three-term complex V0 -> V1 -> V2.
struct TangentComplexData {
    std::array<std::vector<std::string>, 3> labels;
    Matrix gauge_derivative;      // dim1 x dim0
    Matrix curvature_derivative;  // dim2 x dim1
    std::array<std::size_t, 3> dims() const;
};

struct TangentDims {
    std::size_t h0 = 0;
    std::size_t h1 = 0;
    std::size_t h2 = 0;
    friend bool operator==(const TangentDims&, const TangentDims&) = default;
};

TangentDims cohomology_dims(const TangentComplexData& t);

/// Tangent complex of W(A) at w: U_0^0 -> U_0^1 + T -> U_0^1, with T the
/// alpha0 directions whose constant term lies in Im(ad_N(0)) on g_S.
/// The degree-0 map is v -> (V(v) + [C, v], [N, v]). Throws
/// std::invalid_argument when w is not flat.
TangentComplexData tangent_complex(const ConnectionElement& w, const ResidueDatum& rd, const DglaContext& ctx);

struct TangentReport {
    TangentComplexData finite;
    TangentDims finite_dims;
    bool chain_condition = false;
    /// The reduced model H^0 -> H^1 + T_Q -> H^1, present when C is in H^1 and N in H^0.
    std::optional<TangentComplexData> reduced;
    std::optional<TangentDims> reduced_dims;
    /// The inclusion of the reduced model induces isomorphisms in every degree.
    std::optional<bool> quasi_isomorphic;
    /// Direct sum of eigenvalue slices |u| <= bound with delta_S + ad_w.
    std::vector<Rational> big_eigenvalues;
    TangentDims big_dims;
    bool big_agrees = false;
    /// The derivative of the gauge action is -(delta_S + ad_w); the sign is dropped.
    std::string sign_convention;
};

TangentDims tangent_cohomology_dims(const ConnectionElement& w, const ResidueDatum& rd, const DglaContext& ctx);

/// Full report. A bound of std::nullopt picks max |lambda| + w0 + pq.
TangentReport tangent_report(const ConnectionElement& w, const ResidueDatum& rd, const DglaContext& ctx,
                             std::optional<Rational> u_bound = std::nullopt);

}  // namespace logflat
