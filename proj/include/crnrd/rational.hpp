#ifndef CRNRD_RATIONAL_HPP
#define CRNRD_RATIONAL_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace crnrd {

using Rat = boost::rational<long long>;
using RatMatrix = std::vector<std::vector<Rat>>;

/// Exact conversion of a finite decimal literal ("2", "1.5", "0.25") to a
/// rational. Returns nullopt for malformed input or overflow-scale literals.
std::optional<Rat> rational_from_decimal(const std::string& text);

double to_double(const Rat& q);

Eigen::MatrixXd to_eigen(const RatMatrix& m);

/// Reduced row echelon form over the rationals, in place.
/// Returns the rank; pivot columns are appended to `pivots` if non-null.
int rref(RatMatrix& m, std::vector<int>* pivots = nullptr);

/// Basis of the null space {x : m x = 0} of an r x c rational matrix.
/// Rows of the result are the basis vectors (possibly empty).
RatMatrix null_space(RatMatrix m);

/// Rank of a rational matrix.
int rational_rank(RatMatrix m);

/// Canonicalize a rational basis: RREF, clear denominators and common factors
/// per row, sign-normalize so each row's first nonzero entry is positive, and
/// greedily combine rows to prefer nonnegative representatives when available.
RatMatrix canonicalize_basis(RatMatrix basis);

} // namespace crnrd

#endif
