#pragma once

#include <span>

namespace vpp::stochastic {

enum class RiskKind { Expectation, Cvar };

struct RiskMeasure {
    RiskKind kind = RiskKind::Expectation;
    double alpha = 0.9;  // Cvar only

    static RiskMeasure expectation() { return {}; }
    static RiskMeasure cvar(double alpha);
    void validate() const;
};

/// Empirical cost CVaR: mean of the worst (1 - alpha) probability mass,
/// splitting the atom that straddles the quantile. Throws on empty input,
/// mismatched lengths, alpha outside (0, 1) or probabilities not summing
/// to one within 1e-9.
double cvarOfSamples(std::span<const double> costs, std::span<const double> probs, double alpha);

double expectationOfSamples(std::span<const double> costs, std::span<const double> probs);

/// The risk functional selected by `risk`.
double riskOfSamples(const RiskMeasure& risk, std::span<const double> costs, std::span<const double> probs);

}  // namespace vpp::stochastic
