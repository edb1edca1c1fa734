#pragma once

#include "qhchain/spectral.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace qhc {

double participation_ratio(const Eigen::VectorXd& v);

// Shortest window [first, last] (0-based, inclusive) holding at least 1 - eps of sum v^2.
struct SupportInterval {
    Eigen::Index first = 0;
    Eigen::Index last = 0;
    Eigen::Index width() const { return last - first + 1; }
};
SupportInterval support_interval(const Eigen::VectorXd& v, double eps = 1e-3);

struct ModeLocalization {
    Eigen::Index k = 0;
    double omega = 0;
    double participation_ratio = 0;
    Eigen::Index center = 0;  // 1-based midpoint of J(k)
    Eigen::Index width = 0;
    double outside_max = 0;  // max |M^{-1/2} phi^k| outside J(k)
    double decay_rate = 0;   // from a log-amplitude fit against distance to the peak
    bool localized = false;  // width <= 2 n^eta
};

struct LocalizationReport {
    std::vector<ModeLocalization> modes;  // k in (n^{1-alpha}, n-1]
    Eigen::Index n = 0;
    double alpha = 0, eta = 0, eps = 0;
    double width_threshold = 0;
    Eigen::Index passed = 0;
    double pass_fraction = 0;
    double omega_bound_constant = 0;  // max over passing modes of (1/omega_k) / n^{3 eta/2}
    double width_omega_exponent = 0;  // slope of log(width) against log(omega)
    double mean_participation = 0;
};

LocalizationReport localization_report(const ModeBasis& basis0, const Eigen::VectorXd& masses, double alpha = 0.25,
                                       double eta = 0.6, double eps = 1e-3);

void write_localization_csv(const std::string& path, const LocalizationReport& report);

}  // namespace qhc
