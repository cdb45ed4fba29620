#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "harness/field.hpp"
#include "harness/kernel.hpp"
#include "harness/noise.hpp"

namespace harness {

enum class InitKind {
    ZeroJoinWall, // X_0 = 0 v W
    Level,        // X_0 = r v W
    FreeLevel,    // X_0 = r everywhere
};

struct ProcessConfig {
    Kernel kernel;
    std::shared_ptr<const Field> wall; // null or all -inf => free process
    InitKind init = InitKind::ZeroJoinWall;
    double level = 0.0;
    int steps = 0;
    NoiseStream noise;
    int side = 0;
    bool record_fields = false; // keep every field; capped use, memory blows up fast
};

struct Trajectory {
    std::vector<double> origin; // origin marginal, length steps+1
    std::vector<Field> fields;  // snapshots per step if requested (index = n)
    Field final_field;
};

// One step of the wall-excluded dynamics, literal form
// W + (P.prev + eps - W)^+ at finite-wall sites, P.prev + eps at -inf sites.
void step_w2(const Field& prev, const Field* wall, const Kernel& kernel,
             const Field& noise, Field& out);

// Rewritten form x + (W - x)^+ with x = P.prev + eps; algebraically equal to
// step_w2, kept separate so the identity is testable.
void step_w3(const Field& prev, const Field* wall, const Kernel& kernel,
             const Field& noise, Field& out);

Field init_field(const ProcessConfig& cfg);

Trajectory run(const ProcessConfig& cfg);

// Called after each step with the post-step fields of every coupled process
// and the shared noise field of that step.
using StepCallback =
    std::function<void(int n, const std::vector<Field>& states, const Field& noise)>;

// Advances several processes on one noise realization. All configs must share
// kernel, side, steps and noise stream; walls and initial conditions may
// differ.
std::vector<Trajectory> run_coupled(const std::vector<ProcessConfig>& cfgs,
                                    const StepCallback& callback = {});

// Deterministic nu recursion: nu_0 = 0 v W, then
// nu_n = P.nu + (W - P.nu)^+ at finite-wall sites, P.nu at -inf sites.
Field nu_init(const Field& wall);
void nu_step(const Field& prev, const Field& wall, const Kernel& kernel, Field& out);
Field run_nu(const Kernel& kernel, const Field& wall, int steps);

struct SandwichReport {
    // max over all sites/steps of the amount by which each inequality fails;
    // <= 0 means it held everywhere.
    double lower_violation = 0.0; // max(nu^{W^i}, nu^{W_i}) - nu^W
    double upper_violation = 0.0; // nu^W - (nu^{W^i} + nu^{W_i})
};

// Checks max(nu^{W^i}, nu^{W_i}) <= nu^W <= nu^{W^i} + nu^{W_i} at every site
// and every step up to n, for a tilde-transformed wall.
SandwichReport nu_sandwich_check(const Kernel& kernel, const Field& tilde_wall,
                                 std::size_t site, int n);

} // namespace harness
