#include "miw/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace miw {

namespace {

using int128 = __int128;

long long narrow(int128 v) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
        throw Error("exact rational arithmetic overflowed 64 bits");
    return static_cast<long long>(v);
}

int128 abs128(int128 v) { return v < 0 ? -v : v; }

int128 gcd128(int128 a, int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make(int128 num, int128 den) {
    if (den == 0) throw SingularSystemError("zero denominator in exact arithmetic");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) return {};
    const int128 g = gcd128(num, den);
    Rational r;
    r.num = narrow(num / g);
    r.den = narrow(den / g);
    return r;
}

}  // namespace

Rational::Rational(long long n, long long d) { *this = make(n, d); }

Rational Rational::operator+(const Rational& o) const {
    return make(static_cast<int128>(num) * o.den + static_cast<int128>(o.num) * den,
                static_cast<int128>(den) * o.den);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    return make(static_cast<int128>(num) * o.num, static_cast<int128>(den) * o.den);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw SingularSystemError("division by zero in exact arithmetic");
    return make(static_cast<int128>(num) * o.den, static_cast<int128>(den) * o.num);
}

std::string Rational::str() const {
    std::ostringstream os;
    os << num;
    if (den != 1) os << '/' << den;
    return os.str();
}

OffsetSet::OffsetSet(std::vector<int> offsets) : offsets_(std::move(offsets)) {
    if (offsets_.empty()) throw DomainError("offset set must not be empty");
    std::sort(offsets_.begin(), offsets_.end());
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
        if (offsets_[i] == 0) throw DomainError("offset 0 is not allowed (a world is not its own neighbour)");
        if (std::abs(offsets_[i]) > 64) throw DomainError("offsets beyond +/-64 are not supported");
        if (i > 0 && offsets_[i] == offsets_[i - 1]) {
            std::ostringstream msg;
            msg << "duplicate offset " << offsets_[i];
            throw DomainError(msg.str());
        }
    }
}

OffsetSet OffsetSet::symmetric(int half_width) {
    if (half_width < 1) throw DomainError("symmetric offset set needs half-width >= 1");
    std::vector<int> c;
    for (int k = -half_width; k <= half_width; ++k)
        if (k != 0) c.push_back(k);
    return OffsetSet(std::move(c));
}

int OffsetSet::max_abs() const {
    int m = 0;
    for (int c : offsets_) m = std::max(m, std::abs(c));
    return m;
}

bool OffsetSet::is_symmetric() const {
    for (int c : offsets_)
        if (!std::binary_search(offsets_.begin(), offsets_.end(), -c)) return false;
    return true;
}

int StencilCoefficients::max_offset() const {
    int m = 0;
    for (int c : offsets) m = std::max(m, std::abs(c));
    return m;
}

bool StencilCoefficients::symmetric_offsets() const {
    for (int c : offsets)
        if (!std::binary_search(offsets.begin(), offsets.end(), -c)) return false;
    return true;
}

namespace {

using RMatrix = std::vector<std::vector<Rational>>;

Rational int_pow(long long base, int exp) {
    Rational r(1);
    Rational b(base);
    for (int i = 0; i < exp; ++i) r = r * b;
    return r;
}

// Gauss-Jordan with exact pivoting; solves A X = B in place, A square n x n,
// B n x m. Throws SingularSystemError when A is rank deficient.
RMatrix solve_exact(RMatrix a, RMatrix b) {
    const std::size_t n = a.size();
    const std::size_t m = b.empty() ? 0 : b[0].size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) throw SingularSystemError("rank-deficient moment matrix");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        const Rational inv = Rational(1) / a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] = a[col][j] * inv;
        for (std::size_t j = 0; j < m; ++j) b[col][j] = b[col][j] * inv;
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col].is_zero()) continue;
            const Rational factor = a[row][col];
            for (std::size_t j = col; j < n; ++j) a[row][j] = a[row][j] - factor * a[col][j];
            for (std::size_t j = 0; j < m; ++j) b[row][j] = b[row][j] - factor * b[col][j];
        }
    }
    return b;
}

}  // namespace

std::vector<std::vector<Rational>> build_stencil_exact(const OffsetSet& offsets, int order) {
    if (order < 2) throw DomainError("stencil order must be at least 2 (a curvature term is required)");
    if (order > 12) throw DomainError("stencil orders beyond 12 are not supported");
    const int C = offsets.size();
    if (C < order) {
        std::ostringstream msg;
        msg << "need at least " << order << " offsets for order " << order << ", got " << C;
        throw DomainError(msg.str());
    }

    const auto& c = offsets.values();
    // moment matrix M[l][k] = c_k^(l+1), l = 0..L-1
    RMatrix M(static_cast<std::size_t>(order), std::vector<Rational>(static_cast<std::size_t>(C)));
    for (int l = 0; l < order; ++l)
        for (int k = 0; k < C; ++k) M[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] = int_pow(c[static_cast<std::size_t>(k)], l + 1);

    RMatrix delta(static_cast<std::size_t>(order), std::vector<Rational>(static_cast<std::size_t>(order)));
    {
        long long fact = 1;
        for (int l = 0; l < order; ++l) {
            fact *= l + 1;
            delta[static_cast<std::size_t>(l)][static_cast<std::size_t>(l)] = Rational(fact);
        }
    }

    if (C == order) {
        // unique solve: alpha = M^-1 delta, rows indexed by offset
        return solve_exact(M, delta);
    }

    // minimum-norm solution alpha = M^T (M M^T)^-1 delta
    RMatrix gram(static_cast<std::size_t>(order), std::vector<Rational>(static_cast<std::size_t>(order)));
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            Rational s;
            for (int k = 0; k < C; ++k)
                s = s + M[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * M[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
        }
    const RMatrix y = solve_exact(gram, delta);
    RMatrix alpha(static_cast<std::size_t>(C), std::vector<Rational>(static_cast<std::size_t>(order)));
    for (int k = 0; k < C; ++k)
        for (int l = 0; l < order; ++l) {
            Rational s;
            for (int i = 0; i < order; ++i)
                s = s + M[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
            alpha[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = s;
        }
    return alpha;
}

StencilCoefficients build_stencil(const OffsetSet& offsets, int order) {
    const auto exact = build_stencil_exact(offsets, order);
    StencilCoefficients s;
    s.offsets = offsets.values();
    s.order = order;
    s.alpha.reserve(exact.size() * static_cast<std::size_t>(order));
    for (const auto& row : exact)
        for (const auto& value : row) s.alpha.push_back(value.to_double());
    return s;
}

double stencil_residual(const StencilCoefficients& s) {
    const int C = s.count();
    const int L = s.order;
    double worst = 0.0;
    double fact = 1.0;
    for (int l = 1; l <= L; ++l) {
        fact *= l;
        for (int lp = 1; lp <= L; ++lp) {
            double sum = 0.0;
            for (int k = 0; k < C; ++k) {
                double power = 1.0;
                for (int i = 0; i < lp; ++i) power *= s.offsets[static_cast<std::size_t>(k)];
                sum += s.at(k, l) * power;
            }
            const double target = (l == lp) ? fact : 0.0;
            worst = std::max(worst, std::abs(sum - target));
        }
    }
    return worst;
}

}  // namespace miw
