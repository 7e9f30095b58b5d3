#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coopreg/problem.hpp"

namespace coopreg {

// A problem together with its synthesis defaults and simulation horizon.
struct Scenario {
  std::string name;
  MultiAgentProblem problem;
  SynthesisOptions options;
  SynthesisMode mode = SynthesisMode::kNominal;
  double t_end = 60.0;
  double dt = 0.01;
  std::uint64_t seed = 0;
};

// Demo defaults; the reference and disturbance magnitudes are free choices.
struct PlatoonConfig {
  int n_agents = 5;
  double spacing = 10.0;             // r_k = -spacing (k - 1)
  Eigen::Vector2d dg0{0.0, 10.0};    // leader position and velocity
  double w2_amplitude = 0.5;         // sinusoid of agent 2, 1 rad/s
  double initial_spread = 2.0;       // x_k(0) = [r_k - spread (k - 1), 0]
  double w4_step = 1.0;              // at t = 15
  double w3_step = -1.0;             // at t = 45
  double w4_time = 15.0;
  double w3_time = 45.0;
};

Scenario platoon_scenario(const PlatoonConfig& config = {});

struct HelicopterConfig {
  std::uint64_t seed = 20160901;
  double amplitude = 2.5;     // rotor force disturbances in [-a, a]
  double mean_dwell = 5.0;    // mean time between disturbance switches
  double horizon = 60.0;
  double settle = 10.0;       // no switches in the last `settle` seconds
  Eigen::Vector3d dg0{0.0, 0.1, 0.3};  // travel ramp start, slope, elevation
  double observer_pole_min = -12.0;
  double observer_pole_max = -10.0;
};

// Rotor parameters p_k = [p1, p2, p3, p4] of the four helicopters.
const std::vector<Eigen::Vector4d>& helicopter_parameters();
AgentPlant helicopter_agent(const Eigen::Vector4d& p);
Scenario helicopter_scenario(const HelicopterConfig& config = {});

// Piecewise-constant disturbance schedule: exponential dwell times with the
// given mean and uniform amplitudes in [-amplitude, amplitude].
std::vector<ExoReset> random_piecewise_constant(std::uint64_t seed, int agent, Eigen::Index dim,
                                                double amplitude, double mean_dwell,
                                                double horizon, Eigen::VectorXd* initial);

// Throws Error(kParseError) naming the line or field, Error(kValidationError)
// naming the violated invariant.
Scenario parse_scenario(const std::string& text, const std::string& source = "<string>");
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

// Structural equality of every matrix, option and reset.
bool scenarios_equal(const Scenario& a, const Scenario& b);

}  // namespace coopreg
