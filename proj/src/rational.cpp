#include "crnrd/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>

namespace crnrd {

std::optional<Rat> rational_from_decimal(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') {
        neg = text[pos] == '-';
        ++pos;
    }
    long long num = 0;
    long long den = 1;
    bool any_digit = false;
    bool seen_dot = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        any_digit = true;
        if (num > (1LL << 56) || den > (1LL << 56)) return std::nullopt;
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
    }
    if (!any_digit) return std::nullopt;
    if (neg) num = -num;
    return Rat(num, den);
}

double to_double(const Rat& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

Eigen::MatrixXd to_eigen(const RatMatrix& m) {
    if (m.empty()) return Eigen::MatrixXd(0, 0);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.size()),
                        static_cast<Eigen::Index>(m[0].size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                to_double(m[i][j]);
    return out;
}

int rref(RatMatrix& m, std::vector<int>* pivots) {
    if (m.empty()) return 0;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int lead = 0;
    int rank = 0;
    for (int col = 0; col < cols && lead < rows; ++col) {
        int pivot = -1;
        for (int r = lead; r < rows; ++r) {
            if (m[r][col] != Rat(0)) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(m[lead], m[pivot]);
        Rat inv = m[lead][col];
        for (int c = 0; c < cols; ++c) m[lead][c] /= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == lead || m[r][col] == Rat(0)) continue;
            Rat factor = m[r][col];
            for (int c = 0; c < cols; ++c) m[r][c] -= factor * m[lead][c];
        }
        if (pivots) pivots->push_back(col);
        ++lead;
        ++rank;
    }
    return rank;
}

RatMatrix null_space(RatMatrix m) {
    if (m.empty() || m[0].empty()) return {};
    const int cols = static_cast<int>(m[0].size());
    std::vector<int> pivots;
    rref(m, &pivots);
    std::vector<bool> is_pivot(cols, false);
    for (int p : pivots) is_pivot[p] = true;

    RatMatrix basis;
    for (int free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[free_col] = Rat(1);
        // Back-substitute: pivot row i has leading 1 at pivots[i].
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -m[i][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

int rational_rank(RatMatrix m) {
    if (m.empty()) return 0;
    return rref(m);
}

namespace {

long long llgcd(long long a, long long b) {
    return std::gcd(std::abs(a), std::abs(b));
}

// Multiply the row by the LCM of denominators and divide by the GCD of
// numerators, giving primitive integer entries.
void make_primitive(std::vector<Rat>& row) {
    long long lcm = 1;
    for (const Rat& q : row) {
        if (q == Rat(0)) continue;
        long long d = q.denominator();
        lcm = lcm / llgcd(lcm, d) * d;
    }
    long long gcd = 0;
    for (Rat& q : row) {
        q *= lcm;
        if (q != Rat(0)) gcd = llgcd(gcd, q.numerator());
    }
    if (gcd > 1)
        for (Rat& q : row) q /= gcd;
    for (const Rat& q : row) {
        if (q != Rat(0)) {
            if (q < Rat(0))
                for (Rat& e : row) e = -e;
            break;
        }
    }
}

int count_negative(const std::vector<Rat>& row) {
    int n = 0;
    for (const Rat& q : row)
        if (q < Rat(0)) ++n;
    return n;
}

} // namespace

RatMatrix canonicalize_basis(RatMatrix basis) {
    if (basis.empty()) return basis;
    rref(basis);
    // Drop all-zero rows produced by dependent input.
    RatMatrix rows;
    for (auto& r : basis) {
        bool nonzero = false;
        for (const Rat& q : r)
            if (q != Rat(0)) nonzero = true;
        if (nonzero) rows.push_back(std::move(r));
    }
    // Prefer nonnegative representatives: greedily replace a row containing
    // negative entries with row + other when that strictly reduces the
    // negative count. Row space is unchanged.
    const int n = static_cast<int>(rows.size());
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 32) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            int neg = count_negative(rows[i]);
            if (neg == 0) continue;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                std::vector<Rat> cand(rows[i].size());
                for (std::size_t c = 0; c < cand.size(); ++c)
                    cand[c] = rows[i][c] + rows[j][c];
                if (count_negative(cand) < neg) {
                    rows[i] = std::move(cand);
                    changed = true;
                    break;
                }
            }
        }
    }
    for (auto& r : rows) make_primitive(r);
    return rows;
}

} // namespace crnrd
