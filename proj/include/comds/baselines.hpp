#pragma once

#include <vector>

#include "comds/types.hpp"

namespace comds {

// Principal components: column-center, project onto the top-ndim right
// singular directions ordered by decreasing singular value. Each direction's
// largest-magnitude loading is made positive so output is reproducible.
Matrix pca_embed(const Matrix& data, int ndim);

// Classical scaling: double-center -1/2 J D∘2 J, take the top-ndim
// nonnegative eigenpairs, scale eigenvectors by sqrt(eigenvalue). Negative
// eigenvalues beyond ndim are fine (non-Euclidean input); if eigenvalues is
// given, the full descending spectrum is written there. Throws NumericalError
// listing the spectrum when fewer than ndim eigenvalues are nonnegative.
Matrix torgerson_mds(const DistanceMatrix& d, int ndim,
                     std::vector<double>* eigenvalues = nullptr);

}  // namespace comds
