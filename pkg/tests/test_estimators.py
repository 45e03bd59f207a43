import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from arceloc.estimators import ArceLocalizer, RoceLocalizer, UTdoaLocalizer
from arceloc.geometry import bistatic_delays
from helpers import FIG3_RECEIVERS_KM

RX = np.array(FIG3_RECEIVERS_KM, float) * 1e3


@pytest.mark.parametrize("cls", [ArceLocalizer, RoceLocalizer, UTdoaLocalizer])
def test_predict_recovers_clean_targets(cls, fig3_network, reference_targets):
    X = np.array([bistatic_delays(p, fig3_network) for p in reference_targets])
    est = cls(receivers=RX).fit(X)
    P = est.predict(X)
    assert P.shape == (3, 3)
    assert np.max(np.linalg.norm(P - np.array(reference_targets), axis=1)) < 1e-6
    assert est.n_features_in_ == 5


def test_params_and_clone():
    est = ArceLocalizer(receivers=RX, theta_bar=10, phi_bar=7, boresight=30)
    params = est.get_params()
    assert params["theta_bar"] == 10 and params["boresight"] == 30
    twin = clone(est)
    assert twin.get_params()["phi_bar"] == 7
    assert not hasattr(twin, "beam_")
    est.set_params(epsilon=1e-10)
    assert est.epsilon == 1e-10


def test_estimate_exposes_family(fig3_network, reference_targets):
    X = bistatic_delays(reference_targets[0], fig3_network)[None]
    (e,) = ArceLocalizer(receivers=RX).fit().estimate(X)
    assert e.winning_family in {"interior", "azimuth_face", "elevation_face", "corner"}
    assert e.candidate_count <= 26


def test_validation_errors(fig3_network):
    with pytest.raises(NotFittedError):
        ArceLocalizer(receivers=RX).predict(np.zeros((1, 5)))
    with pytest.raises(ValueError):
        ArceLocalizer().fit()
    with pytest.raises(ValueError):
        UTdoaLocalizer(receivers=RX, bandwidth=0).fit()
    est = RoceLocalizer(receivers=RX).fit()
    with pytest.raises(ValueError):
        est.predict(np.zeros((2, 4)))
    with pytest.raises(ValueError):
        est.predict(np.full((1, 5), np.nan))


def test_score_is_r2(fig3_network, reference_targets):
    X = np.array([bistatic_delays(p, fig3_network) for p in reference_targets])
    est = UTdoaLocalizer(receivers=RX).fit()
    assert est.score(X, np.array(reference_targets)) == pytest.approx(1.0)
