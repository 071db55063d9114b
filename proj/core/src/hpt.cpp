#include "logflat/hpt.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace logflat {

namespace {

std::size_t at_or_zero(const Dims& dims, int k)
{
    return (k < 0 || k >= static_cast<int>(dims.size())) ? 0 : dims[static_cast<std::size_t>(k)];
}

void paste(Matrix& dst, std::size_t r0, std::size_t c0, const Matrix& src)
{
    for (std::size_t r = 0; r < src.rows(); ++r)
        for (std::size_t c = 0; c < src.cols(); ++c) dst(r0 + r, c0 + c) = src(r, c);
}

Matrix rows_of(const Matrix& m, std::size_t r0, std::size_t nr) { return block(m, r0, 0, nr, m.cols()); }

void require_shape(const GradedMap& m, const Dims& src, const Dims& dst, int shift, const char* what)
{
    if (m.src() != src || m.dst() != dst || m.shift() != shift) {
        throw std::invalid_argument(std::string("contraction shape mismatch in ") + what);
    }
}

IdentityCheck compare(std::string name, const GradedMap& lhs, const GradedMap& rhs)
{
    IdentityCheck out{std::move(name), true, std::nullopt, std::nullopt};
    for (std::size_t k = 0; k < lhs.degrees(); ++k) {
        const Matrix& l = lhs.block(static_cast<int>(k));
        const Matrix& r = rhs.block(static_cast<int>(k));
        for (std::size_t c = 0; c < l.cols(); ++c) {
            if (l.column(c) != r.column(c)) {
                out.pass = false;
                out.degree = static_cast<int>(k);
                out.column = c;
                return out;
            }
        }
    }
    return out;
}

GradedMap zero_like(const Dims& src, const Dims& dst, int shift) { return GradedMap(src, dst, shift); }

}  // namespace

GradedMap::GradedMap(Dims src, Dims dst, int shift) : src_(std::move(src)), dst_(std::move(dst)), shift_(shift)
{
    blocks_.reserve(src_.size());
    for (std::size_t k = 0; k < src_.size(); ++k) {
        blocks_.emplace_back(at_or_zero(dst_, static_cast<int>(k) + shift_), src_[k]);
    }
}

GradedMap GradedMap::identity(const Dims& dims)
{
    GradedMap out(dims, dims, 0);
    for (std::size_t k = 0; k < dims.size(); ++k) out.blocks_[k] = Matrix::identity(dims[k]);
    return out;
}

bool GradedMap::is_zero() const
{
    return std::all_of(blocks_.begin(), blocks_.end(), [](const Matrix& m) { return m.is_zero(); });
}

GradedMap& GradedMap::operator+=(const GradedMap& other)
{
    require_shape(other, src_, dst_, shift_, "sum");
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
    return *this;
}

GradedMap& GradedMap::operator-=(const GradedMap& other)
{
    require_shape(other, src_, dst_, shift_, "difference");
    for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
    return *this;
}

GradedMap& GradedMap::operator*=(const Rational& s)
{
    for (auto& b : blocks_) b *= s;
    return *this;
}

GradedMap operator*(const GradedMap& f, const GradedMap& g)
{
    if (g.dst_ != f.src_) throw std::invalid_argument("GradedMap composition: dimension mismatch");
    GradedMap out(g.src_, f.dst_, f.shift_ + g.shift_);
    for (std::size_t k = 0; k < g.src_.size(); ++k) {
        const int mid = static_cast<int>(k) + g.shift_;
        if (mid < 0 || mid >= static_cast<int>(f.src_.size())) continue;
        out.blocks_[k] = f.block(mid) * g.blocks_[k];
    }
    return out;
}

Complex Complex::zero_differential(const Dims& dims) { return Complex{dims, GradedMap(dims, dims, 1)}; }

bool ContractionReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

ContractionReport verify_contraction(const Contraction& c)
{
    const Dims& s = c.small.dims;
    const Dims& l = c.big.dims;
    require_shape(c.small.d, s, s, 1, "small differential");
    require_shape(c.big.d, l, l, 1, "big differential");
    require_shape(c.a, s, l, 0, "a");
    require_shape(c.b, l, s, 0, "b");
    require_shape(c.h, l, l, -1, "h");

    ContractionReport r;
    r.checks.push_back(compare("big differential squares to zero", c.big.d * c.big.d, zero_like(l, l, 2)));
    r.checks.push_back(compare("small differential squares to zero", c.small.d * c.small.d, zero_like(s, s, 2)));
    r.checks.push_back(compare("a is a chain map", c.big.d * c.a, c.a * c.small.d));
    r.checks.push_back(compare("b is a chain map", c.small.d * c.b, c.b * c.big.d));
    r.checks.push_back(compare("b a = id", c.b * c.a, GradedMap::identity(s)));
    r.checks.push_back(
        compare("d h + h d = id - a b", c.big.d * c.h + c.h * c.big.d, GradedMap::identity(l) - c.a * c.b));
    r.checks.push_back(compare("h a = 0", c.h * c.a, zero_like(s, l, -1)));
    r.checks.push_back(compare("b h = 0", c.b * c.h, zero_like(l, s, -1)));
    r.checks.push_back(compare("h h = 0", c.h * c.h, zero_like(l, l, -2)));
    return r;
}

std::optional<std::size_t> nilpotence_exponent(const GradedMap& m, std::size_t bound)
{
    if (m.shift() != 0 || m.src() != m.dst()) throw std::invalid_argument("nilpotence_exponent: not an endomorphism");
    if (m.is_zero()) return 1;
    GradedMap power = m;
    for (std::size_t k = 2; k <= bound; ++k) {
        power = power * m;
        if (power.is_zero()) return k;
    }
    return std::nullopt;
}

PerturbationResult perturb(const Contraction& c, const GradedMap& t)
{
    require_shape(t, c.big.dims, c.big.dims, 1, "perturbation");
    const std::size_t total = std::accumulate(c.big.dims.begin(), c.big.dims.end(), std::size_t{0});
    const auto exponent = nilpotence_exponent(c.h * t, total + 1);
    if (!exponent) throw std::domain_error("perturb: h composed with the perturbation is not nilpotent");

    // A = sum_k (-t h)^k t; (t h)^k t = t (h t)^k, so the sum is finite.
    const GradedMap minus_th = Rational(-1) * (t * c.h);
    GradedMap a_sum(c.big.dims, c.big.dims, 1);
    GradedMap term = t;
    std::size_t terms = 0;
    while (!term.is_zero()) {
        a_sum += term;
        ++terms;
        term = minus_th * term;
        if (terms > total + 1) throw std::logic_error("perturb: series did not terminate");
    }

    PerturbationResult out;
    out.exponent = *exponent;
    out.series_terms = terms;
    Contraction& p = out.contraction;
    p.small = Complex{c.small.dims, c.small.d + c.b * a_sum * c.a};
    p.big = Complex{c.big.dims, c.big.d + t};
    p.a = c.a - c.h * a_sum * c.a;
    p.b = c.b - c.b * a_sum * c.h;
    p.h = c.h - c.h * a_sum * c.h;
    return out;
}

U0Contraction u0_contraction(const DglaContext& ctx)
{
    U0Contraction out;
    out.u0 = U0_complex(ctx);
    out.cohomology = cohomology_U0(ctx, out.u0);
    const U0Complex& u0 = out.u0;
    const U0Cohomology& h = out.cohomology;
    const std::size_t dim0 = u0.basis0.size();
    const std::size_t dim1 = u0.basis1.size();
    const std::size_t h0 = h.h0.size();
    const std::size_t h1 = h.h1.size();

    // Complement to H^0: first-fit basis vectors, each weight homogeneous.
    Matrix span = h.h0_vectors;
    std::size_t r = rank(span);
    for (std::size_t k = 0; k < dim0 && r < dim0; ++k) {
        Vector e(dim0);
        e[k] = 1;
        Matrix candidate = hstack(span, Matrix::from_columns(dim0, {e}));
        const std::size_t rc = rank(candidate);
        if (rc > r) {
            span = std::move(candidate);
            r = rc;
            out.complement.push_back(k);
        }
    }
    const Matrix comp = block(span, 0, h0, dim0, span.cols() - h0);
    const Matrix image = u0.delta * comp;

    const auto q0_inv = inverse(span);
    const auto q1_inv = inverse(hstack(h.h1_vectors, image));
    if (!q0_inv || !q1_inv || image.cols() + h1 != dim1) {
        throw std::logic_error("u0_contraction: cohomology does not split U_0");
    }

    Contraction& c = out.contraction;
    const Dims small{h0, h1};
    const Dims big{dim0, dim1};
    c.small = Complex::zero_differential(small);
    c.big = Complex{big, GradedMap(big, big, 1)};
    c.big.d.block(0) = u0.delta;
    c.a = GradedMap(small, big, 0);
    c.a.block(0) = h.h0_vectors;
    c.a.block(1) = h.h1_vectors;
    c.b = GradedMap(big, small, 0);
    c.b.block(0) = rows_of(*q0_inv, 0, h0);
    c.b.block(1) = rows_of(*q1_inv, 0, h1);
    c.h = GradedMap(big, big, -1);
    c.h.block(1) = comp * rows_of(*q1_inv, h1, dim1 - h1);
    return out;
}

GradedMap u0_perturbation(const U0Complex& u0, const PolyMatrix& gamma)
{
    const Dims big{u0.basis0.size(), u0.basis1.size()};
    GradedMap t(big, big, 1);
    const std::size_t n = gamma.n();
    for (std::size_t c = 0; c < u0.basis0.size(); ++c) {
        const Term& s = u0.basis0[c];
        const PolyMatrix x = PolyMatrix::single(n, s.i, s.j, WeightedPolynomial::monomial(s.mono));
        t.block(0).set_column(c, u0_coordinates(bracket(gamma, x), u0.basis1));
    }
    return t;
}

SliceContraction slice_contraction(const DglaContext& ctx, const std::vector<Rational>& eigenvalues)
{
    std::vector<Rational> us = eigenvalues;
    for (auto& u : us) u.canonicalize();
    std::sort(us.begin(), us.end());
    us.erase(std::unique(us.begin(), us.end()), us.end());

    SliceContraction out;
    Dims big(3, 0);
    Dims small(3, 0);
    long zero_slice = -1;
    for (const auto& u : us) {
        out.slices.emplace_back(u, ctx);
        Dims off(3);
        for (int k = 0; k < 3; ++k) {
            off[static_cast<std::size_t>(k)] = big[static_cast<std::size_t>(k)];
            big[static_cast<std::size_t>(k)] += out.slices.back().dim(k);
        }
        out.offsets.push_back(off);
        if (u == 0) {
            zero_slice = static_cast<long>(out.slices.size() - 1);
            for (int k = 0; k < 3; ++k) small[static_cast<std::size_t>(k)] = out.slices.back().dim(k);
        }
    }

    Contraction& c = out.contraction;
    c.small = Complex{small, GradedMap(small, small, 1)};
    c.big = Complex{big, GradedMap(big, big, 1)};
    c.a = GradedMap(small, big, 0);
    c.b = GradedMap(big, small, 0);
    c.h = GradedMap(big, big, -1);
    for (std::size_t s = 0; s < out.slices.size(); ++s) {
        const ComplexSlice& sl = out.slices[s];
        const Dims& off = out.offsets[s];
        for (int k = 0; k < 3; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            if (k < 2) paste(c.big.d.block(k), off[uk + 1], off[uk], sl.delta_S(k));
            if (k > 0) paste(c.h.block(k), off[uk - 1], off[uk], sl.homotopy(k));
            if (static_cast<long>(s) == zero_slice) {
                paste(c.a.block(k), off[uk], 0, Matrix::identity(sl.dim(k)));
                paste(c.b.block(k), 0, off[uk], Matrix::identity(sl.dim(k)));
                if (k < 2) paste(c.small.d.block(k), 0, 0, sl.delta_S(k));
            }
        }
    }
    return out;
}

GradedMap slice_perturbation(const SliceContraction& sc, const DglaElement& w)
{
    if (w.degree() != 1) throw std::invalid_argument("slice_perturbation: w must have degree 1");
    const Dims& big = sc.contraction.big.dims;
    GradedMap t(big, big, 1);
    for (std::size_t s = 0; s < sc.slices.size(); ++s) {
        const ComplexSlice& sl = sc.slices[s];
        const Dims& off = sc.offsets[s];
        for (int k = 0; k < 2; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            paste(t.block(k), off[uk + 1], off[uk], sl.ad(w, k));
        }
    }
    return t;
}

}  // namespace logflat
