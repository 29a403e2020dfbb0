#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace amc {

// Exact rational on __int128. Overflow throws instead of wrapping, so exact
// mode either gives the true answer or refuses loudly.
struct Rat {
    __int128 num;
    __int128 den;

    Rat() : num(0), den(1) {}
    Rat(long long n) : num(n), den(1) {}
    Rat(__int128 n, __int128 d);

    bool is_zero() const { return num == 0; }
    bool is_negative() const { return num < 0; }

    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    Rat operator-() const;
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const;

    double to_double() const;
    std::string to_string() const;
};

using RatMat = std::vector<std::vector<Rat>>;

// Exact conversion; throws if the double is not finite or has no short
// dyadic form.
Rat rat_from_double(double x);

int rational_rank(RatMat a);
bool rational_nonsingular(const RatMat& a);

// Solves a square system exactly. Throws on singular input.
std::vector<Rat> rational_solve(RatMat a, std::vector<Rat> b);

Rat rat_binomial(int n, int k);

}  // namespace amc
