#pragma once

#include "convexeit/sym_matrix.hpp"

#include <vector>

namespace convexeit {

struct EigenDecomposition {
    std::vector<double> values;        // ascending
    std::vector<std::vector<double>> vectors;  // vectors[k] is the unit eigenvector of values[k]
    int sweeps = 0;
};

/// Full spectral decomposition by cyclic Jacobi rotations. Deterministic for
/// a given input and kernel ISA. Repeated eigenvalues are fine.
/// Throws std::invalid_argument on non-finite entries.
EigenDecomposition eigh(const SymMatrix& a);

struct TopEigenpair {
    double value = 0.0;
    std::vector<double> vector;
};

TopEigenpair lambda_max(const SymMatrix& a);

/// A <= B in the Loewner order, up to tol: lambda_max(A - B) <= tol.
bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol);

/// Spectral norm: largest absolute eigenvalue.
double spectral_norm(const SymMatrix& a);

}  // namespace convexeit
