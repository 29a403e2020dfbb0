#include "amc/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace amc {

namespace {

__int128 iabs(__int128 x) { return x < 0 ? -x : x; }

__int128 igcd(__int128 a, __int128 b) {
    a = iabs(a);
    b = iabs(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

const __int128 kLimit = (__int128(1) << 100);

__int128 checked_mul(__int128 a, __int128 b) {
    if (a == 0 || b == 0) return 0;
    __int128 r = a * b;
    if (iabs(a) > kLimit || iabs(b) > kLimit || r / b != a)
        throw std::overflow_error("rational overflow");
    return r;
}

__int128 checked_add(__int128 a, __int128 b) {
    __int128 r = a + b;
    if ((b > 0 && r < a) || (b < 0 && r > a))
        throw std::overflow_error("rational overflow");
    return r;
}

}  // namespace

Rat::Rat(__int128 n, __int128 d) : num(n), den(d) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = igcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
}

Rat Rat::operator+(const Rat& o) const {
    __int128 g = igcd(den, o.den);
    __int128 lhs = checked_mul(num, o.den / g);
    __int128 rhs = checked_mul(o.num, den / g);
    return Rat(checked_add(lhs, rhs), checked_mul(den, o.den / g));
}

Rat Rat::operator-(const Rat& o) const { return *this + (-o); }

Rat Rat::operator*(const Rat& o) const {
    __int128 g1 = igcd(num, o.den);
    __int128 g2 = igcd(o.num, den);
    return Rat(checked_mul(num / g1, o.num / g2), checked_mul(den / g2, o.den / g1));
}

Rat Rat::operator/(const Rat& o) const {
    if (o.num == 0) throw std::domain_error("rational division by zero");
    return *this * Rat(o.den, o.num);
}

Rat Rat::operator-() const {
    Rat r;
    r.num = -num;
    r.den = den;
    return r;
}

bool Rat::operator<(const Rat& o) const {
    return checked_mul(num, o.den) < checked_mul(o.num, den);
}

double Rat::to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rat::to_string() const {
    auto s = [](__int128 v) {
        if (v == 0) return std::string("0");
        bool neg = v < 0;
        if (neg) v = -v;
        std::string out;
        while (v > 0) {
            out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        }
        if (neg) out.insert(out.begin(), '-');
        return out;
    };
    if (den == 1) return s(num);
    return s(num) + "/" + s(den);
}

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("rational from non-finite double");
    if (x == 0.0) return Rat();
    double scaled = x;
    __int128 den = 1;
    for (int i = 0; i < 62; ++i) {
        if (scaled == std::floor(scaled) && std::abs(scaled) < 9.0e18)
            return Rat(static_cast<__int128>(static_cast<long long>(scaled)), den);
        scaled *= 2.0;
        den <<= 1;
    }
    throw std::domain_error("double has no short dyadic form");
}

int rational_rank(RatMat a) {
    if (a.empty()) return 0;
    size_t m = a.size(), n = a[0].size();
    size_t row = 0;
    int rank = 0;
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t piv = row;
        while (piv < m && a[piv][col].is_zero()) ++piv;
        if (piv == m) continue;
        std::swap(a[row], a[piv]);
        for (size_t i = row + 1; i < m; ++i) {
            if (a[i][col].is_zero()) continue;
            Rat f = a[i][col] / a[row][col];
            for (size_t j = col; j < n; ++j) a[i][j] = a[i][j] - f * a[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

bool rational_nonsingular(const RatMat& a) {
    if (a.empty()) return true;
    if (a.size() != a[0].size()) throw std::invalid_argument("nonsingular test on non-square matrix");
    return rational_rank(a) == static_cast<int>(a.size());
}

std::vector<Rat> rational_solve(RatMat a, std::vector<Rat> b) {
    size_t n = a.size();
    if (n == 0 || a[0].size() != n || b.size() != n)
        throw std::invalid_argument("rational_solve: shape mismatch");
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::domain_error("rational_solve: singular matrix");
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (size_t i = 0; i < n; ++i) {
            if (i == col || a[i][col].is_zero()) continue;
            Rat f = a[i][col] / a[col][col];
            for (size_t j = col; j < n; ++j) a[i][j] = a[i][j] - f * a[col][j];
            b[i] = b[i] - f * b[col];
        }
    }
    std::vector<Rat> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

Rat rat_binomial(int n, int k) {
    if (k < 0 || k > n) return Rat(0);
    if (k > n - k) k = n - k;
    Rat r(1);
    for (int i = 1; i <= k; ++i) r = r * Rat(n - k + i) / Rat(i);
    return r;
}

}  // namespace amc
