#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mastergeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense rank-3 tensor with all three indices ranging over [0, n).
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}

    std::size_t dim() const noexcept { return n_; }

    double& operator()(std::size_t a, std::size_t b, std::size_t c) {
        return data_[(a * n_ + b) * n_ + c];
    }
    double operator()(std::size_t a, std::size_t b, std::size_t c) const {
        return data_[(a * n_ + b) * n_ + c];
    }

    const std::vector<double>& data() const noexcept { return data_; }

    Tensor3& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }
    friend Tensor3 operator*(double s, Tensor3 t) { return t *= s; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

}  // namespace mastergeo
