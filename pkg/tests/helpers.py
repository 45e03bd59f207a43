import numpy as np

from arceloc.geometry import SensorNetwork
from arceloc.measurement import SnrScenario, db_to_linear, noise_model_for, simulate_delays

FIG3_RECEIVERS_KM = [[916, 941, 95], [973, 541, 764], [955, 483, 191], [936, 350, 477]]


def fig3_network():
    return SensorNetwork(np.array(FIG3_RECEIVERS_KM, dtype=float) * 1e3)


def random_network(rng, n):
    lo = np.array([700e3, 300e3, 50e3])
    hi = np.array([1000e3, 1000e3, 800e3])
    return SensorNetwork(rng.uniform(lo, hi, size=(n, 3)))


def random_in_beam_target(rng, beam, range_m=20e3):
    # slopes uniform over the cone cross-section
    u = rng.uniform(-beam.gamma_a, beam.gamma_a)
    v = rng.uniform(-beam.gamma_e, beam.gamma_e)
    d = np.array([1.0, u, v])
    return beam.to_world_frame(range_m * d / np.linalg.norm(d))


def noisy_instance(rng, network, target, snr0_db=10.0, bandwidth=2e6):
    n = network.n_receivers
    sc = SnrScenario(float(db_to_linear(snr0_db)), [20e3, 0, 0], db_to_linear([0] + [6] * n))
    nm = noise_model_for(sc, target, network, bandwidth)
    return simulate_delays(target, network, nm, rng)
