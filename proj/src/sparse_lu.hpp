#pragma once

#include <Eigen/Sparse>
#include <Eigen/UmfPackSupport>

#include <stdexcept>

namespace vortex::detail {

// Sparse direct factorization (UMFPACK with nested-dissection ordering).
class SparseLU {
public:
    void factorize(const Eigen::SparseMatrix<double>& m) {
        matrix_ = m;
        matrix_.makeCompressed();
        lu_.umfpackControl()(UMFPACK_ORDERING) = UMFPACK_ORDERING_METIS;
        lu_.compute(matrix_);
        if (lu_.info() != Eigen::Success) throw std::runtime_error("sparse LU factorization failed");
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        Eigen::VectorXd x = lu_.solve(b);
        if (lu_.info() != Eigen::Success) throw std::runtime_error("sparse LU solve failed");
        return x;
    }

    Eigen::Index rows() const { return matrix_.rows(); }
    const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }

private:
    Eigen::SparseMatrix<double> matrix_;
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu_;
};

} // namespace vortex::detail
