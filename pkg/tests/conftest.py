import numpy as np
import pytest

from homsim import (
    BeamsplitterModel,
    DetectorResponse,
    EmitterModel,
    coherence_time_from_lorentzian,
    jitter_sigma_from_gaussian,
)

# demo emitter pair used throughout: an electrically driven reference dot
# (Lorentzian 5.2 ueV, tau_r 600 ps, 5% background) and a field-tunable dot
# (Lorentzian 2.2 ueV plus 6.8 ueV Gaussian jitter, tau_r 800 ps, clean)


@pytest.fixture(scope="session")
def dot_a() -> EmitterModel:
    return EmitterModel(
        tau_r_ps=600.0,
        background=0.05,
        tau_c_ps=coherence_time_from_lorentzian(5.2),
        jitter_sigma_ueV=0.0,
        center_energy_ueV=1_314_000.0,
        intensity=1.0,
    )


@pytest.fixture(scope="session")
def dot_1() -> EmitterModel:
    return EmitterModel(
        tau_r_ps=800.0,
        background=0.0,
        tau_c_ps=coherence_time_from_lorentzian(2.2),
        jitter_sigma_ueV=jitter_sigma_from_gaussian(6.8),
        center_energy_ueV=1_314_000.0,
        intensity=1.0,
    )


@pytest.fixture(scope="session")
def detector() -> DetectorResponse:
    return DetectorResponse(fwhm_ps=428.0)


@pytest.fixture(scope="session")
def splitter() -> BeamsplitterModel:
    return BeamsplitterModel(transmission=0.5, overlap=1.0, polarization="parallel")


def random_emitter(rng: np.random.Generator) -> EmitterModel:
    """Physically valid random emitter for property tests."""
    tau_r = rng.uniform(100.0, 2000.0)
    return EmitterModel(
        tau_r_ps=tau_r,
        background=rng.uniform(0.0, 1.0),
        tau_c_ps=rng.uniform(20.0, 2.0 * tau_r),
        jitter_sigma_ueV=rng.uniform(0.0, 5.0),
        center_energy_ueV=1_314_000.0,
        intensity=rng.uniform(0.2, 5.0),
    )
