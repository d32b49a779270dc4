#pragma once

#include "beamfluid/core_fields.hpp"

namespace bf {

struct BeamParams {
  double rho_s = 1.0;
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;

  // Throws InvalidArgument naming the violated hypothesis.
  void validate() const;
};

struct BeamState {
  ScalarField1D h;
  ScalarField1D hdot;
  double t = 0.0;
};

struct BeamEnergy {
  double kinetic = 0.0;
  double elastic_alpha = 0.0;
  double elastic_beta = 0.0;
  double dissipation = 0.0;

  double total() const { return kinetic + elastic_alpha + elastic_beta; }
};

// -beta h_xx + alpha h_xxxx - gamma hdot_xx
ScalarField1D beam_elastic_operator(const BeamState& state, const BeamParams& params);

double default_h_floor(const ScalarField1D& h0);

// One implicit-midpoint step with the load held fixed over the step.
BeamState beam_step(const BeamState& state, const ScalarField1D& load, double dt,
                    const BeamParams& params, double h_floor);

BeamEnergy beam_energy(const BeamState& state, const BeamParams& params);

}  // namespace bf
