#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dispatchsim/transfer_function.hpp"

namespace dispatchsim {

/// x[k+1] = A x[k] + B u[k],  y[k] = C x[k] + D u[k]
struct DiscreteStateSpace {
    Eigen::MatrixXd A;
    Eigen::VectorXd B;
    Eigen::RowVectorXd C;
    double D = 0.0;
    double dt = 0.0;

    Eigen::Index order() const noexcept { return A.rows(); }
    /// State reached after a constant input u has been applied forever.
    Eigen::VectorXd steady_state(double u) const;
    Complex frequency_response(double omega) const;
};

/// Bilinear (Tustin) map s <- (2/dt)(z-1)/(z+1) realized in controllable
/// canonical form. Throws ImproperTF, or BilinearSingularity when the
/// denominator vanishes at s = 2/dt.
DiscreteStateSpace discretize(const TransferFunction& tf, double dt);

std::vector<double> simulate(const DiscreteStateSpace& sys, std::span<const double> u);
std::vector<double> simulate(const DiscreteStateSpace& sys, std::span<const double> u, Eigen::VectorXd x0);

/// A proper transfer function split into first- and second-order sections
/// (poles paired with their conjugates, zeros assigned to the nearest
/// section), each discretized with `discretize`. High-order canonical forms
/// in z lose all accuracy when poles crowd around z = 1; the cascade does not.
class SosCascade {
public:
    SosCascade(const TransferFunction& tf, double dt);

    std::size_t sections() const noexcept { return sections_.size(); }
    double dt() const noexcept { return dt_; }

    void reset();
    /// Put every section at the equilibrium for a constant input u.
    void reset_to_steady_state(double u);
    double step(double u);
    std::vector<double> filter(std::span<const double> u);

private:
    struct Section {
        DiscreteStateSpace ss;
        Eigen::VectorXd x;
    };

    double dt_;
    double gain_ = 1.0;
    std::vector<Section> sections_;
};

}  // namespace dispatchsim
