"""Smoke test of the pycoexsim extension; run after `pip install`."""

import pycoexsim

CONFIG = """
name = "smoke"
scenario = "indoor-indoor"
channel_scheme = "sense"
legacy_count = 10
entrant_sweep = [1, 5]
variants = ["lte-always-on", "lte-fixed50-coord"]
realizations = 3
"""


def main():
    assert "lte-ideal-tdma" in pycoexsim.variants()
    assert pycoexsim.presets() == ["fig3", "fig4", "fig5", "fig6", "fig7"]
    assert "[propagation]" in pycoexsim.validate(CONFIG)

    run = pycoexsim.run(CONFIG, realizations=20, seed=7)
    assert run.name == "smoke" and run.realizations == 20
    rows = run.medians()
    assert len(rows) == 2 * 2 * 2
    entrant = {(mac, n): m for n, pop, mac, m in rows if pop == "entrant"}
    assert entrant[("lte-always-on", 1)] == 86.4
    assert entrant[("lte-fixed50-coord", 5)] == 43.2

    cdf = run.cdf("lte-always-on", 5, "legacy")
    assert cdf[-1][1] == 1.0
    assert all(a[0] < b[0] and a[1] <= b[1] for a, b in zip(cdf, cdf[1:]))
    assert run.median_csv().startswith("sweep,population,mac,median_mbps\n")

    again = pycoexsim.run(CONFIG, realizations=20, seed=7, workers=2)
    assert again.median_csv() == run.median_csv()

    for bad, fragment in [
        (CONFIG.replace("legacy_count = 10", "legacy_count = -1"), "legacy_count"),
        (CONFIG.replace("lte-always-on", "lte-tdma"), "lte-ideal-tdma"),
    ]:
        try:
            pycoexsim.validate(bad)
        except ValueError as e:
            assert fragment in str(e), e
        else:
            raise AssertionError("invalid config accepted")

    fig7 = pycoexsim.run_preset("fig7", realizations=2)
    assert [r.name for r in fig7] == ["fig7"]
    print("pycoexsim smoke test passed:", run)


if __name__ == "__main__":
    main()
