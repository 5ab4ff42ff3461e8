#include "sosbound/presets.hpp"

#include <algorithm>
#include <cmath>

#include "sosbound/hbalance.hpp"

namespace sosbound {

namespace {

double max_amplitude(const FrequencyResponsePoint& p) {
    return p.amplitudes.empty() ? 0.0 : p.amplitudes.back();
}

}  // namespace

DynSystem cubic1d() {
    DynSystem sys;
    sys.var_names = {"x"};
    const Polynomial x = Polynomial::variable(1, 0);
    sys.field = {x - x.pow(3)};
    sys.validate();
    return sys;
}

ForcedSystem duffing_forced(const DuffingParams& p) {
    DynSystem base;
    base.var_names = {"x", "y"};
    const Polynomial x = Polynomial::variable(2, 0);
    const Polynomial y = Polynomial::variable(2, 1);
    base.field = {y, -(y * p.delta) - x * p.alpha - x.pow(3) * p.beta};
    base.metadata = {{"delta", p.delta}, {"alpha", p.alpha}, {"beta", p.beta}};

    ForcedSystem fs;
    fs.base = std::move(base);
    fs.amplitude = p.force;
    fs.frequency = p.omega;
    fs.forcing = {{1, 1.0}};
    fs.carrier = ForcingCarrier::CosInZ2;
    return fs;
}

DynSystem duffing_lifted(const DuffingParams& p, bool stabilize) {
    DynSystem sys = autonomize_periodic(duffing_forced(p), stabilize);
    // Scale hints keep the moment problem O(1) even at resonance amplitudes.
    const double r = max_amplitude(
        duffing_response({p.delta, p.alpha, p.beta, p.force}, p.omega));
    sys.metadata["scale:x"] = std::max(1.0, 1.25 * r);
    sys.metadata["scale:y"] = std::max(1.0, 1.25 * p.omega * r);
    const double zs = p.force > 0.0 ? p.force : 1.0;
    sys.metadata["scale:z1"] = zs;
    sys.metadata["scale:z2"] = zs;
    return sys;
}

Polynomial duffing_observable(const DynSystem& lifted) {
    return Polynomial::variable(lifted.dimension(), lifted.var_index("x")).pow(2);
}

DynSystem pendulum_lifted(const PendulumParams& p, bool stabilize) {
    // (theta, phi, psi1, psi2) with psi1/psi2 the sin/cos placeholders.
    DynSystem prelift;
    prelift.var_names = {"theta", "phi", "psi1", "psi2"};
    const Polynomial phi = Polynomial::variable(4, 1);
    const Polynomial psi1 = Polynomial::variable(4, 2);
    prelift.field = {phi, -(phi * p.gamma) - psi1, Polynomial(4), Polynomial(4)};
    prelift.metadata = {{"gamma", p.gamma}};

    DynSystem trig = lift_trig_state(prelift, TrigLiftSpec{0, 2, 3}, stabilize);

    ForcedSystem fs;
    fs.base = std::move(trig);
    fs.amplitude = p.force;
    fs.frequency = p.omega;
    fs.forcing = {{0, 1.0}};  // phi' gains +z1 (the cosine carrier here)
    fs.carrier = ForcingCarrier::CosInZ1;
    DynSystem sys = autonomize_periodic(fs, stabilize);

    const double r0 =
        max_amplitude(pendulum_response({p.gamma, p.force, false}, p.omega));
    const double rpi =
        max_amplitude(pendulum_response({p.gamma, p.force, true}, p.omega));
    const double r = std::max(r0, rpi);
    sys.metadata["scale:phi"] = std::max(2.0, 1.3 * p.omega * r);
    sys.metadata["scale:psi1"] = 1.0;
    sys.metadata["scale:psi2"] = 1.0;
    const double zs = p.force > 0.0 ? p.force : 1.0;
    sys.metadata["scale:z1"] = zs;
    sys.metadata["scale:z2"] = zs;
    return sys;
}

Polynomial pendulum_energy(const DynSystem& lifted) {
    const int n = lifted.dimension();
    const Polynomial phi = Polynomial::variable(n, lifted.var_index("phi"));
    const Polynomial psi2 = Polynomial::variable(n, lifted.var_index("psi2"));
    return phi * phi * 0.5 - psi2;
}

Polynomial pendulum_observable(const DynSystem& lifted) {
    const Polynomial z1 =
        Polynomial::variable(lifted.dimension(), lifted.var_index("z1"));
    return pendulum_energy(lifted) + z1 * z1;
}

DynSystem with_absorbing_ball(DynSystem sys, double rho2) {
    const int n = sys.dimension();
    Polynomial ball = Polynomial::constant(n, rho2);
    for (int i = 0; i < n; ++i) {
        double s = 1.0;
        auto it = sys.metadata.find("scale:" + sys.var_names[i]);
        if (it != sys.metadata.end() && it->second > 0.0) s = it->second;
        const Polynomial xi = Polynomial::variable(n, i);
        ball = ball - xi * xi * (1.0 / (s * s));
    }
    sys.constraint_set.inequalities.push_back(std::move(ball));
    sys.metadata["ball:rho2"] = rho2;
    return sys;
}

}  // namespace sosbound
