import math

import numpy as np
import pytest

from expectile_hydro.errors import AlignmentError, DomainError, OrderingError
from expectile_hydro.hydro import get_model, run_model, simulate
from expectile_hydro.hydro.forcing import (
    daily_mean_temp,
    extraterrestrial_radiation,
    oudin_pet,
)
from expectile_hydro.hydro.gr4j import (
    Gr4jParams,
    Gr4jState,
    gr4j_step,
    run_gr4j,
    uh_ordinates,
)
from expectile_hydro.hydro.lr2 import Lr2Params, initial_storage, lr2_step, run_lr2
from expectile_hydro.series import DailySeries


def _ra_oracle(lat, doy):
    # extraterrestrial radiation, scalar math only
    d = 0.409 * math.sin(2 * math.pi * doy / 365 - 1.39)
    dr = 1 + 0.033 * math.cos(2 * math.pi * doy / 365)
    ws = math.acos(max(-1.0, min(1.0, -math.tan(lat) * math.tan(d))))
    return 24 * 60 / math.pi * 0.0820 * dr * (
        ws * math.sin(lat) * math.sin(d) + math.cos(lat) * math.cos(d) * math.sin(ws)
    )


def test_mean_temperature():
    np.testing.assert_array_equal(daily_mean_temp([0.0, -4.0], [10.0, 2.0]), [5.0, -1.0])
    with pytest.raises(OrderingError):
        daily_mean_temp([3.0], [2.0])


def test_pet_frozen_values():
    assert oudin_pet(20.0, 0.0, 80) == pytest.approx(3.8580697369778223, rel=1e-12)
    assert oudin_pet(10.0, math.radians(45), 172) == pytest.approx(2.5649202095768855, rel=1e-12)


def test_radiation_matches_oracle():
    for lat in (-1.2, -0.5, 0.0, 0.3, 0.9, 1.3):
        for doy in (1, 45, 100, 172, 250, 355):
            assert extraterrestrial_radiation(lat, doy) == pytest.approx(_ra_oracle(lat, doy), rel=1e-12, abs=1e-12)


def test_pet_zero_at_cold_temperatures():
    assert oudin_pet(-5.0, 0.5, 100) == 0.0
    assert oudin_pet(-20.0, 0.5, 100) == 0.0
    pet = oudin_pet(np.linspace(-30, 40, 71), 0.7, 200)
    assert np.all(pet >= 0)


def test_polar_night_pet_is_zero():
    assert oudin_pet(10.0, math.radians(80), 355) == pytest.approx(0.0, abs=1e-12)


def test_pet_rejects_bad_day():
    with pytest.raises(DomainError):
        oudin_pet(10.0, 0.0, 0)
    with pytest.raises(DomainError):
        oudin_pet(10.0, 0.0, 367)


def test_uh_ordinates():
    for x4 in (0.5, 1.0, 1.7, 2.0, 3.3, 7.25, 10.0, 20.0):
        o1, o2 = uh_ordinates(x4)
        assert len(o1) == math.ceil(x4) <= 20 and len(o2) == math.ceil(2 * x4) <= 40
        assert np.all(o1 >= 0) and np.all(o2 >= 0)
        assert abs(o1.sum() - 1.0) <= 1e-12
        assert abs(o2.sum() - 1.0) <= 1e-12


def test_uh_ordinates_x4_one():
    o1, o2 = uh_ordinates(1.0)
    np.testing.assert_allclose(o1, [1.0])
    np.testing.assert_allclose(o2, [0.5, 0.5])


def test_gr4j_params_validation():
    with pytest.raises(DomainError):
        Gr4jParams(0.0, 0.0, 50.0, 2.0)
    with pytest.raises(DomainError):
        Gr4jParams(100.0, 0.0, 50.0, 0.4)


def test_gr4j_step_matches_hand_oracle():
    # values from an independent scripted single step starting from empty buffers
    state = Gr4jState(150.0, 30.0)
    cases = [
        (Gr4jParams(300, 0, 60, 2), 10.0, 2.0, 0.4966220657619663, 155.80888893628307, 29.87134843846622),
        (Gr4jParams(300, 1.5, 60, 2), 10.0, 2.0, 0.6393891120332241, 155.80888893628307, 29.99374643513992),
        (Gr4jParams(300, -2, 60, 2.5), 0.0, 4.0, 0.4390337062582538, 146.93743967431595, 29.39171257750807),
    ]
    for params, p, e, q_ref, s_ref, r_ref in cases:
        new, q = gr4j_step(state, p, e, params)
        assert q == pytest.approx(q_ref, abs=1e-9)
        assert new.s == pytest.approx(s_ref, abs=1e-9)
        assert new.r == pytest.approx(r_ref, abs=1e-9)
    assert state.s == 150.0


def test_gr4j_step_dry_empty():
    state = Gr4jState(0.0, 0.0)
    new, q = gr4j_step(state, 0.0, 0.0, Gr4jParams(300, 0, 60, 2))
    assert q == 0.0 and new.s == 0.0 and new.r == 0.0


def _forcing(n, seed=0):
    rng = np.random.default_rng(seed)
    p = np.where(rng.random(n) < 0.35, rng.exponential(8.0, n), 0.0)
    e = 2.0 + 1.5 * np.sin(2 * np.pi * np.arange(n) / 365.25)
    return p, e


@pytest.mark.parametrize("x2", [0.0, 1.2, -3.0])
def test_gr4j_mass_balance(x2):
    p, e = _forcing(3653)
    params = Gr4jParams(350.0, x2, 90.0, 1.7)
    out = run_gr4j(params, p, e)
    d_storage = out["final"].storage() - out["initial"].storage()
    residual = p.sum() - out["aet"].sum() - out["q"].sum() - d_storage + out["exchange"].sum()
    assert abs(residual) <= 1e-6 * p.sum()
    if x2 == 0.0:
        assert np.all(out["exchange"] == 0.0)


def test_gr4j_store_bounds_random_steps():
    rng = np.random.default_rng(4)
    for _ in range(10_000):
        x1 = rng.uniform(10, 3000)
        x3 = rng.uniform(5, 1000)
        params = Gr4jParams(x1, rng.uniform(-10, 10), x3, rng.uniform(0.5, 10))
        state = Gr4jState(rng.uniform(0, x1), rng.uniform(0, x3), rng.uniform(0, 20, 20), rng.uniform(0, 5, 40))
        new, q = gr4j_step(state, rng.exponential(20.0) * (rng.random() < 0.5), rng.uniform(0, 8), params)
        assert 0.0 <= new.s <= x1
        assert 0.0 <= new.r <= x3
        assert q >= 0.0


def test_gr4j_recession_and_determinism():
    params = Gr4jParams(350.0, 0.0, 90.0, 1.7)
    n = 400
    q = run_gr4j(params, np.zeros(n), np.zeros(n))["q"]
    assert np.all(np.diff(q[1:]) <= 0)
    assert q[-1] < 0.05 * q[1]
    p, e = _forcing(500, seed=2)
    a = run_gr4j(params, p, e)["q"]
    b = run_gr4j(params, p, e)["q"]
    assert np.array_equal(a, b)
    assert np.all(a >= 0)


def test_gr4j_initial_state():
    st = Gr4jState.initial(Gr4jParams(400.0, 0.0, 80.0, 2.0))
    assert st.s == 120.0 and st.r == 40.0
    assert st.storage() == 160.0


def test_lr2_examples():
    params = Lr2Params(c=100.0, k=2.0)
    assert lr2_step(0.0, 0.0, 5.0, params) == (0.0, 0.0)
    w, q = lr2_step(100.0, 10.0, 0.0, params)
    assert q == pytest.approx(10.0 + 50.0) and w == pytest.approx(50.0)
    assert initial_storage(params) == 50.0


def test_lr2_steady_state():
    params = Lr2Params(c=150.0, k=5.0)
    n = 2000
    q = run_lr2(params, np.full(n, 3.0), np.zeros(n))["q"]
    assert q[-1] == pytest.approx(3.0, rel=1e-10)


def test_lr2_mass_balance_and_bounds():
    p, e = _forcing(3653, seed=6)
    params = Lr2Params(c=120.0, k=8.0)
    out = run_lr2(params, p, e)
    residual = p.sum() - out["aet"].sum() - out["q"].sum() - (out["final"] - out["initial"])
    assert abs(residual) <= 1e-9 * p.sum()
    rng = np.random.default_rng(1)
    for _ in range(2000):
        c = rng.uniform(10, 2000)
        pr = Lr2Params(c, rng.uniform(1, 200))
        w, q = lr2_step(rng.uniform(0, c), rng.exponential(20.0), rng.uniform(0, 8), pr)
        assert 0.0 <= w <= c and q >= 0.0


def test_lr2_rejects_negative_forcing():
    with pytest.raises(DomainError):
        lr2_step(10.0, -1.0, 0.0, Lr2Params(100.0, 2.0))


def test_simulate_series_and_registry():
    p, e = _forcing(100)
    precip = DailySeries("2001-01-01", p)
    pet = DailySeries("2001-01-01", e)
    sim = simulate("gr4j", [350.0, 0.0, 90.0, 1.7], precip, pet)
    assert sim.start_date == precip.start_date and len(sim) == 100
    assert np.array_equal(sim.values, run_model("gr4j", {"x1": 350.0, "x2": 0.0, "x3": 90.0, "x4": 1.7}, p, e)["q"])
    with pytest.raises(AlignmentError):
        simulate("lr2", [100.0, 3.0], precip, DailySeries("2001-01-02", e))
    spec = get_model("gr4j")
    nat = np.array([350.0, -1.5, 90.0, 1.7])
    np.testing.assert_allclose(spec.from_search(spec.to_search(nat)), nat, rtol=1e-12)
