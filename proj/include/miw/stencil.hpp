#pragma once

#include <string>
#include <vector>

#include "miw/errors.hpp"

namespace miw {

/// Exact rational number on 64-bit numerator/denominator, always kept
/// normalised (den > 0, gcd = 1). Intermediate products go through 128-bit
/// arithmetic and overflow throws instead of wrapping.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const { return {-num, den}; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool is_zero() const { return num == 0; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    /// "3/4", "-1/12", "2"
    std::string str() const;
};

/// Validated set of distinct nonzero integer offsets, stored ascending.
class OffsetSet {
public:
    explicit OffsetSet(std::vector<int> offsets);
    /// {-w, ..., -1, 1, ..., w}
    static OffsetSet symmetric(int half_width);

    const std::vector<int>& values() const { return offsets_; }
    int size() const { return static_cast<int>(offsets_.size()); }
    int max_abs() const;
    /// True when the set is closed under negation.
    bool is_symmetric() const;

private:
    std::vector<int> offsets_;
};

/// Finite-difference-style weights alpha[c][l] extracting the first L scaled
/// derivatives of the inverse cumulative map from neighbour differences:
/// moment conditions sum_c alpha_{c,l} c^{l'} = l! delta_{l,l'}, l,l' = 1..L.
/// Rows follow the ascending offset order; columns are l = 1..L.
struct StencilCoefficients {
    std::vector<int> offsets;   ///< ascending, size C
    int order = 0;              ///< L
    std::vector<double> alpha;  ///< row-major C x L

    double at(int c_index, int l) const { return alpha[static_cast<std::size_t>(c_index) * order + (l - 1)]; }
    int count() const { return static_cast<int>(offsets.size()); }
    int max_offset() const;
    bool symmetric_offsets() const;
};

/// Solves the moment conditions in exact rational arithmetic.
/// C == L: unique solution. C > L: minimum-norm solution through the
/// Moore-Penrose pseudoinverse (also exact). C < L or L < 2 is rejected;
/// a rank-deficient moment matrix throws SingularSystemError.
StencilCoefficients build_stencil(const OffsetSet& offsets, int order);

/// Same solve, returning the exact weights (row-major C x L, like alpha).
std::vector<std::vector<Rational>> build_stencil_exact(const OffsetSet& offsets, int order);

/// Largest violation of the moment conditions, max over l,l' of
/// |sum_c alpha_{c,l} c^{l'} - l! delta_{l,l'}|. Near zero for healthy weights.
double stencil_residual(const StencilCoefficients& s);

}  // namespace miw
