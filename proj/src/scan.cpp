#include "pmdq/scan.hpp"

#include <random>

namespace pmdq {

std::string to_string(Axis axis) {
    switch (axis) {
        case Axis::tau1: return "tau1";
        case Axis::tau2: return "tau2";
        case Axis::tau: return "tau";
        case Axis::delta: return "delta";
    }
    return "?";
}

std::string to_string(Engine engine) {
    switch (engine) {
        case Engine::analytic: return "analytic";
        case Engine::numeric: return "numeric";
        case Engine::automatic: return "auto";
    }
    return "?";
}

Axis parse_axis(const std::string& name) {
    if (name == "tau1") return Axis::tau1;
    if (name == "tau2") return Axis::tau2;
    if (name == "tau") return Axis::tau;
    if (name == "delta") return Axis::delta;
    throw ConfigError("unknown scan axis '" + name + "'");
}

Engine parse_engine(const std::string& name) {
    if (name == "analytic") return Engine::analytic;
    if (name == "numeric") return Engine::numeric;
    if (name == "auto") return Engine::automatic;
    throw ConfigError("unknown engine '" + name + "'");
}

std::string axis_unit(Axis axis) { return axis == Axis::delta ? "um" : "fs"; }

Eigen::VectorXd linspace(double start, double stop, Eigen::Index points) {
    if (points < 1) throw InputDomainError("grid needs at least one point");
    if (points == 1) return Eigen::VectorXd::Constant(1, start);
    return Eigen::VectorXd::LinSpaced(points, start, stop);
}

void require_monotone(const Eigen::VectorXd& grid) {
    if (grid.size() == 0) throw InputDomainError("scan grid is empty");
    if (grid.size() == 1) return;
    const Eigen::VectorXd d = grid.tail(grid.size() - 1) - grid.head(grid.size() - 1);
    if (!((d.array() > 0.0).all() || (d.array() < 0.0).all()))
        throw InputDomainError("scan grid must be strictly monotone");
}

void apply_noise(ScanResult& scan, double relative, std::uint64_t seed) {
    if (!(relative >= 0.0)) throw InputDomainError("noise level must be >= 0");
    if (relative == 0.0) return;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < scan.value.size(); ++i) scan.value(i) *= 1.0 + relative * normal(rng);
}

}  // namespace pmdq

namespace pmdq {

bool use_closed_form(Engine engine, bool linear) {
    switch (engine) {
        case Engine::numeric: return false;
        case Engine::automatic: return linear;
        case Engine::analytic:
            if (!linear) throw ClosedFormInapplicable("closed form needs beta = gamma = 0 in every sample");
            return true;
    }
    return false;
}

}  // namespace pmdq
