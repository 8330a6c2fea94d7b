import pytest

import vtdc

PS = 1000  # fs per ps


def reference_vernier(n=64, mismatch=0, jitter=0, seed=0):
    slow = vtdc.DelayLineSpec(n, vtdc.time_from_ps("102.7"), mismatch, jitter)
    fast = vtdc.DelayLineSpec(n, vtdc.time_from_ps("77.7"), mismatch, jitter)
    return vtdc.VernierTdc(vtdc.VernierTdcConfig(slow, fast), seed)


def test_time_helpers():
    assert vtdc.time_from_ps("2.5") == 2500
    assert vtdc.format_ps(25000) == "25"
    with pytest.raises(ValueError):
        vtdc.time_from_ps("1.0001")


def test_encoder():
    enc = vtdc.priority_encode("11111000")
    assert enc["value"] == 5
    assert enc["bits"] == "0101"
    assert not enc["flags"]["bubble"]
    assert vtdc.priority_encode("1111100")["bits"] == "101"
    assert vtdc.leading_ones("1101") == (2, True)


def test_transient_conversion():
    tdc = reference_vernier()
    assert tdc.metrics()["lsb"] == 25 * PS
    r = tdc.convert(2500 * PS, 4000 * PS)
    assert r["code"]["value"] == 59
    assert r["delta_t_estimate"] == 1_487_500
    under = tdc.convert(4000 * PS, 2500 * PS)
    assert under["code"]["flags"]["underrange"]


def test_ideal_code_agrees_with_converter():
    tdc = reference_vernier(16)
    for dt in range(-30 * PS, 450 * PS, 1237):
        assert tdc.convert(0, dt)["code"]["value"] == vtdc.ideal_code(25 * PS, 16, dt)


def test_characterization_is_linear():
    tdc = reference_vernier(16)
    t = vtdc.refine_transitions(tdc, 0, 18 * 25 * PS)
    assert t == [k * 25 * PS + 1 for k in range(1, 17)]
    r = vtdc.dnl_inl(t, 25 * PS)
    assert r["dnl_peak"] == 0.0 and r["inl_peak"] == 0.0
    curve = vtdc.sweep_transfer(tdc, 0, 100 * PS, 25 * PS)
    assert curve == [(0, 0), (25000, 0), (50000, 1), (75000, 2), (100000, 3)]


def test_flash_and_precision():
    flash = vtdc.FlashTdc(vtdc.FlashTdcConfig(vtdc.DelayLineSpec(8, 100 * PS)))
    assert flash.convert(0, 350 * PS)["code"]["value"] == 3
    shot = vtdc.single_shot(reference_vernier(8, jitter=2 * PS), 25 * PS, 2000, 5)
    assert sum(shot["histogram"].values()) == 2000
    assert set(shot["histogram"]) <= {0, 1, 2}


def test_tof():
    geom = vtdc.DetectorGeometry(800.0, 300.0)
    assert vtdc.displacement_mm(66 * PS, geom) == pytest.approx(9.9, abs=1e-9)
    t1, t2 = vtdc.arrival_times(geom, 93.75)
    loc = vtdc.localize(geom, t1, t2, reference_vernier())
    assert loc["measured_code"] == 24
    assert loc["position_estimate_mm"] == pytest.approx(91.875)
    t1, t2 = vtdc.arrival_times(geom, 300.0)
    with pytest.raises(ValueError):
        vtdc.localize(geom, t1, t2, reference_vernier())
    s = vtdc.run_experiment(geom, reference_vernier(), 2000, seed=3)
    assert s["n_overrange"] == 0
    assert s["max_abs_err_mm"] <= 1.88


def test_cli():
    code, out, err = vtdc.run_cli(["convert", "--t-start", "2500", "--t-stop", "4000"])
    assert code == 0
    assert out == "2500000,4000000,59,0111011,none,1487500\n"
    code, out, err = vtdc.run_cli(["info", "--set", "tau_slw_ps=1"])
    assert code == 1
    assert "tau_slw_ps" in err
