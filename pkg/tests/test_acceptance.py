"""Acceptance suite: one test per release criterion, each printing a
pass/fail line. Runs entirely through the public surfaces (sim harness,
agent API, store, HTTP server)."""

import json
import time
from contextlib import contextmanager

import numpy as np
import pytest
from fastapi.testclient import TestClient

from pxp.agents import Feedback, create_agent, deserialize_agent
from pxp.agents.base import SIGMA_MIN
from pxp.agents.cmaes import SIGMA0_CMA
from pxp.param_space import FloatDim, ParamSpec
from pxp.sim import load_fixture, run
from pxp.store import Store
from pxp.server.app import create_app

from test_cmaes_agent import _oracle_generation
from test_gaussian_agent import (
    BLOBS,
    GAMMA as REDUCTION_GAMMA,
    SIGMAS as REDUCTION_SIGMAS,
    _entry,
    _oracle_reduce,
    _reduction_fixture,
    _state,
)
from test_server import make_config


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[acceptance] {name}: FAIL")
        raise
    print(f"[acceptance] {name}: PASS")


# ----------------------------------------------------------------------

def test_cmaes_sphere_sanity(sphere_fixture_path):
    with criterion("cmaes-sphere-sanity"):
        fixture = load_fixture(sphere_fixture_path)
        target = fixture.scorer.center
        started = time.monotonic()
        finals = []
        for seed in range(10):
            _, agent = run("cmaes", fixture, iterations=3000, seed=seed,
                           agent_config={"n": 1})
            finals.append(float(np.linalg.norm(agent.niches[0].mean - target)))
        elapsed = time.monotonic() - started
        print(f"  final |m - x*| per seed: {[f'{d:.1e}' for d in finals]}")
        print(f"  elapsed: {elapsed:.1f}s")
        assert np.median(finals) < 1e-2
        assert elapsed < 10.0


def test_cmaes_generation_oracle():
    with criterion("cmaes-generation-oracle"):
        spec = ParamSpec([("a", FloatDim(0, 1)), ("b", FloatDim(0, 1))])
        agent = create_agent("cmaes", spec, {"n": 1, "lambda": 4}, seed=2026)
        niche = agent.niches[0]
        m0, sigma0, cov0 = niche.mean.copy(), niche.sigma, niche.cov.copy()
        plays = [agent.play() for _ in range(4)]
        zs = [np.array(json.loads(p.metadata["z"])) for p in plays]
        scores = [2.5, 0.5, 4.0, 1.0]
        for p, s in zip(plays, scores):
            agent.update(Feedback(p.params, s, p.metadata))
        order = sorted(range(4), key=lambda i: (-scores[i], i))
        mean, sigma, cov, p_sigma, p_c = _oracle_generation(
            m0, sigma0, cov0, [zs[i] for i in order], generation_after=1
        )
        niche = agent.niches[0]
        np.testing.assert_allclose(niche.mean, mean, atol=1e-10, rtol=0)
        assert abs(niche.sigma - sigma) <= 1e-10
        np.testing.assert_allclose(niche.p_sigma, p_sigma, atol=1e-10, rtol=0)
        np.testing.assert_allclose(niche.p_c, p_c, atol=1e-10, rtol=0)
        np.testing.assert_allclose(niche.cov, cov, atol=1e-10, rtol=0)


def test_multimodal_discovery(peaks_fixture_path):
    with criterion("multimodal-discovery"):
        fixture = load_fixture(peaks_fixture_path)
        agents = [("random", {}), ("gaussian", {}), ("open_ended", {}),
                  ("cmaes", {"n": 4})]
        medians, populations = {}, []
        for name, config in agents:
            found = []
            for seed in range(10):
                started = time.monotonic()
                report, agent = run(name, fixture, iterations=1000, seed=seed,
                                    agent_config=dict(config))
                assert time.monotonic() - started < 30.0
                found.append(report.peaks_discovered)
                if name == "open_ended":
                    populations.append(len(agent.populations))
            medians[name] = float(np.median(found))
            print(f"  {name}: peaks per seed {found} -> median {medians[name]}")
        print(f"  open_ended populations per seed: {populations}")
        assert medians["gaussian"] >= medians["random"]
        assert medians["open_ended"] >= medians["random"]
        assert medians["cmaes"] >= medians["random"]
        assert np.median(populations) >= 3


def test_time_warp_algebra(float_spec):
    with criterion("time-warp-algebra"):
        rng = np.random.default_rng(1)

        def sigma_map(agent):
            name = agent.name
            if name == "gaussian":
                return dict(agent.sigmas)
            if name == "open_ended":
                return {i: p["sigma"] for i, p in agent.populations.items()}
            return {j: n.sigma for j, n in enumerate(agent.niches)}

        for name in ("gaussian", "open_ended", "cmaes"):
            agent = create_agent(name, float_spec, seed=5)
            # give sigma-bearing state something to scale
            for _ in range(6):
                p = agent.play()
                agent.update(Feedback(p.params, float(rng.uniform(1, 5)), p.metadata))
            before = sigma_map(agent)
            assert before, name
            for steps in (3, -2):
                prior = sigma_map(agent)
                agent.time_warp(steps)
                after = sigma_map(agent)
                for key, s in prior.items():
                    expected = s * agent.gamma**steps
                    if SIGMA_MIN < expected < 0.5:  # unclamped regime
                        rel = abs(after[key] - expected) / expected
                        assert rel <= 1e-12, (name, steps)
            fresh = sigma_map(agent)
            agent.time_warp(4)
            agent.time_warp(-4)
            for key, s in sigma_map(agent).items():
                assert abs(s - fresh[key]) <= 1e-9, name


def test_gaussian_reduction_oracle():
    with criterion("gaussian-reduction"):
        spec = ParamSpec([("x", FloatDim(0, 1)), ("y", FloatDim(0, 1))])
        stored, extra = _reduction_fixture()
        state = _state(
            spec,
            {
                "k": 5,
                "gamma": REDUCTION_GAMMA,
                "dim": 2,
                "portfolio_max": 20,
                "small_cluster_threshold": 2,
                "sigmas": {str(m): s for m, s in REDUCTION_SIGMAS.items()},
                "portfolio": [_entry(p, s, m) for p, s, m in stored],
            },
        )
        agent = deserialize_agent(state, spec)
        point, score, mode = extra
        agent.update(Feedback(spec.decode(point), score, {"mode": str(mode)}))
        sigmas = dict(REDUCTION_SIGMAS)
        sigmas[0] *= REDUCTION_GAMMA
        oracle = _oracle_reduce(stored + [extra], k=5, gamma=REDUCTION_GAMMA,
                                sigmas=sigmas, threshold=2)
        assert len(agent.portfolio) == len(oracle) == 5
        for entry, (o_point, o_score, o_sigma, o_count) in zip(agent.portfolio, oracle):
            assert np.allclose(entry[0], o_point) and entry[1] == o_score
            assert agent.sigmas[entry[2]] == pytest.approx(o_sigma, rel=1e-12)
        # singleton cluster boosted by exactly 1/gamma
        singleton_mode = agent.portfolio[-1][2]
        assert agent.sigmas[singleton_mode] == pytest.approx(
            REDUCTION_SIGMAS[4] / REDUCTION_GAMMA, rel=1e-12
        )


def test_open_ended_repulsion(float_spec):
    with criterion("open-ended-repulsion"):
        agent = create_agent("open_ended", float_spec, seed=6)
        center = float_spec.decode(np.full(7, 0.5))
        agent.update(Feedback(center, 0.0))
        for _ in range(1000):
            p = agent.play()
            assert p.metadata["population"] == "0"
            assert float_spec.distance(p.params, center) >= agent.r_rep


def test_cmaes_niching_restart():
    with criterion("cmaes-niching-restart"):
        spec = ParamSpec([("a", FloatDim(0, 1)), ("b", FloatDim(0, 1))])
        agent = create_agent("cmaes", spec, {"n": 2, "lambda": 4}, seed=8)
        state = agent.serialize()
        state["payload"]["niches"][0]["mean"] = [0.5, 0.5]
        state["payload"]["niches"][1]["mean"] = [0.53, 0.5]
        agent = deserialize_agent(state, spec)
        meta = {"agent": "cmaes", "niche": "0", "z": "[0.0, 0.0]",
                "x_enc": "[0.5, 0.5]"}
        params = spec.decode(np.array([0.5, 0.5]))
        for _ in range(4):
            agent.update(Feedback(params, 1.0, meta))
        later = agent.niches[1]
        assert later.sigma == SIGMA0_CMA
        np.testing.assert_array_equal(later.cov, np.eye(2))
        assert later.buffer == [] and later.generation == 0


def test_determinism_and_persistence(mixed_spec, tmp_path):
    with criterion("determinism-and-persistence"):
        # (a) mid-session round-trip per agent: next 100 proposals identical
        rng = np.random.default_rng(3)
        for name in ("random", "gaussian", "open_ended", "cmaes"):
            agent = create_agent(name, mixed_spec, seed=17)
            for _ in range(25):
                p = agent.play()
                score = float(rng.choice([0.0, 1.5, 4.0]))
                if score > 0:
                    agent.update(Feedback(p.params, score, p.metadata))
            clone = deserialize_agent(
                json.loads(json.dumps(agent.serialize())), mixed_spec
            )
            for _ in range(100):
                assert agent.play().params == clone.play().params, name

        # (b) kill/restart the server mid-session: stream and store continue
        config = make_config(tmp_path, "acceptance")
        app1 = create_app(config)
        with TestClient(app1) as c1:
            items = c1.post("/api/agents/open_ended/play", json={"count": 10}).json()
            for item, score in zip(items[:4], (4.0, 0.0, 2.5, 3.0)):
                c1.post("/api/feedback", json={"draw_id": item["draw_id"],
                                               "score": score})
        app2 = create_app(config)  # fresh process state, same disk state
        app3 = create_app(config)
        with TestClient(app2) as c2, TestClient(app3) as c3:
            stream2 = [i["params"] for i in
                       c2.post("/api/agents/open_ended/play", json={"count": 20}).json()]
            stream3 = [i["params"] for i in
                       c3.post("/api/agents/open_ended/play", json={"count": 20}).json()]
            assert stream2 == stream3
            gallery2 = c2.get("/api/gallery", params={"order": "asc", "limit": 10}).json()
            gallery3 = c3.get("/api/gallery", params={"order": "asc", "limit": 10}).json()
            assert gallery2 == gallery3
            assert len(gallery2) == 10


def test_store_durability(tmp_path):
    with criterion("store-durability"):
        db = tmp_path / "durability" / "db.json"
        store = Store(db)
        rng = np.random.default_rng(2026)
        expected = []
        with store.batch():
            for i in range(1000):
                params = {
                    "x": float(rng.random()),
                    "y": float(rng.standard_normal() * 1e-7),
                    "k": int(rng.integers(-5, 99)),
                    "c": str(rng.choice(["a", "b", "c"])),
                }
                draw_id = store.insert_drawing(params, agent="random")
                store.set_score(draw_id, float(rng.uniform(0, 5)))
                expected.append((draw_id, params, store.get_drawing(draw_id).score))
        reopened = Store(db)
        assert len(reopened) == 1000
        for draw_id, params, score in expected:
            rec = reopened.get_drawing(draw_id)
            assert rec.params == params  # bit-exact float equality
            assert rec.score == score
