import pytest

from votemanip import engine


def test_split_ranges_covers_everything():
    for total in (0, 1, 5, 36, 100):
        for parts in (1, 2, 7, 200):
            ranges = engine.split_ranges(total, parts)
            flat = [i for lo, hi in ranges for i in range(lo, hi)]
            assert flat == list(range(total))
            assert len(ranges) <= max(parts, 1)


def test_effective_tasks_env_override(monkeypatch):
    monkeypatch.delenv(engine.ENV_TASKS, raising=False)
    assert engine.effective_tasks(None) == 1
    assert engine.effective_tasks(4) == 4
    monkeypatch.setenv(engine.ENV_TASKS, "3")
    assert engine.effective_tasks(8) == 3
    monkeypatch.setenv(engine.ENV_TASKS, "zero")
    with pytest.raises(ValueError):
        engine.effective_tasks(1)
    monkeypatch.setenv(engine.ENV_TASKS, "0")
    with pytest.raises(ValueError):
        engine.effective_tasks(1)


def test_stream_seed_disjoint():
    seeds = {engine.derive_stream_seed(s, t) for s in range(3) for t in range(100)}
    assert len(seeds) == 300
