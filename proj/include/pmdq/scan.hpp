#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "pmdq/errors.hpp"
#include "pmdq/spectral.hpp"

namespace pmdq {

enum class Axis { tau1, tau2, tau, delta };
enum class Engine { analytic, numeric, automatic };

std::string to_string(Axis axis);
std::string to_string(Engine engine);
Axis parse_axis(const std::string& name);
Engine parse_engine(const std::string& name);

/// "fs" for delay axes, "um" for the classical path delay.
std::string axis_unit(Axis axis);

struct ScanOptions {
    Engine engine = Engine::automatic;
    unsigned threads = 1;
    bool physical = false;  // reject tau < 0
    SpectralOptions spectral;
};

struct ScanResult {
    Axis axis = Axis::tau1;
    Eigen::VectorXd delay;
    Eigen::VectorXd value;
    nlohmann::json metadata;

    Eigen::Index size() const { return delay.size(); }
    double step() const { return size() > 1 ? (delay(size() - 1) - delay(0)) / double(size() - 1) : 0.0; }
};

/// `points` equally spaced values from start to stop inclusive.
Eigen::VectorXd linspace(double start, double stop, Eigen::Index points);

/// Throws InputDomainError unless the grid is nonempty and strictly monotone.
void require_monotone(const Eigen::VectorXd& grid);

/// Evaluates f at every grid point on up to `threads` workers. Results are
/// stored by index so the output does not depend on scheduling. A
/// QuadratureError is rethrown with the offending grid value in its message.
template <typename F>
Eigen::VectorXd parallel_map(const Eigen::VectorXd& grid, unsigned threads, F&& f) {
    const Eigen::Index n = grid.size();
    Eigen::VectorXd out(n);
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n));
    auto work = [&](Eigen::Index begin, Eigen::Index stride) {
        for (Eigen::Index i = begin; i < n; i += stride) {
            try {
                out(i) = f(grid(i));
            } catch (const QuadratureError& e) {
                failures[i] = std::make_exception_ptr(QuadratureError(
                    std::string(e.what()) + " at scan point " + std::to_string(grid(i)), e.estimate(), e.bound()));
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, Eigen::Index(t), Eigen::Index(workers));
        for (auto& th : pool) th.join();
    }
    for (const auto& e : failures)
        if (e) std::rethrow_exception(e);
    return out;
}

/// Multiplies every value by (1 + relative * N(0,1)), seeded mt19937_64.
void apply_noise(ScanResult& scan, double relative, std::uint64_t seed);

}  // namespace pmdq

namespace pmdq {

/// True when the closed form should be used. Throws ClosedFormInapplicable
/// for an explicit analytic request on a nonlinear configuration.
bool use_closed_form(Engine engine, bool linear);

}  // namespace pmdq
