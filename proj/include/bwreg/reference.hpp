#pragma once

// Serial, cache-free versions of the test quantities. Every call refits
// what it needs, transport maps come from the closed-form square roots and
// differentials from a dense Sylvester solve. Used as a test oracle and as
// the baseline in the benchmarks.

#include "bwreg/partial_test.hpp"

namespace bwreg::reference {

// Map pushing N(0, s) to N(0, q).
Matrix transport_map(const SpdMatrix& s, const SpdMatrix& q);
// Matrix of H -> d/dS T_S^q [H] in the shared basis, column by column.
Matrix differential_matrix(const SpdMatrix& s, const SpdMatrix& q);

// Statistic on the index-order split of `data`.
double statistic(const Dataset& data, const SolverOptions& opts = {});

// tau(x, q; X_k) for first-half index k.
SymMatrix tau(const Dataset& data, const Vector& x, const SpdMatrix& q, Index k,
              CovariateEmbedding embedding = CovariateEmbedding::Augmented,
              const SolverOptions& opts = {});

// A(X_k) with a full (not pseudo) inverse.
Matrix a_hat(const Dataset& data, Index k, const SolverOptions& opts = {});

Matrix kernel(const Dataset& data, CovariateEmbedding embedding = CovariateEmbedding::Augmented,
              const SolverOptions& opts = {});

}  // namespace bwreg::reference
