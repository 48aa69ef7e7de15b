"""Small reference domains shipped with the package, for tests and demos."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .pddl import Domain, ProblemInstance, parse_domain, parse_problem
from .tracegen import random_walk
from .traces import Trace

BUNDLES = ("gripper", "hanoi", "transport", "visitall")


@dataclass
class Bundle:
    name: str
    domain: Domain
    problems: list[ProblemInstance]

    def walks(self, steps: int, seed: int = 0) -> list[Trace]:
        """Random walks totalling ``steps`` steps, split evenly over the problems.

        A walk that hits a dead end is topped up with further seeds so the
        total still reaches ``steps``.
        """
        out: list[Trace] = []
        share = -(-steps // len(self.problems))
        for i, p in enumerate(self.problems):
            need, attempt = share, 0
            while need > 0:
                t = random_walk(self.domain, p, need, seed * 1000 + i * 100 + attempt,
                                instance_id=f"{p.name}-s{seed}-{attempt}")
                if not t.steps:
                    break
                out.append(t)
                need -= len(t.steps)
                attempt += 1
        return out


def _text(name: str, file: str) -> str:
    return resources.files("actsynth").joinpath("data", name, file).read_text()


def bundle_files(name: str) -> list[str]:
    if name not in BUNDLES:
        raise KeyError(name)
    d = resources.files("actsynth").joinpath("data", name)
    return sorted(p.name for p in d.iterdir() if p.is_file())


def bundle_path(name: str, file: str):
    """Traversable for a data file (use ``resources.as_file`` for a real path)."""
    return resources.files("actsynth").joinpath("data", name, file)


def load_bundle(name: str) -> Bundle:
    domain = parse_domain(_text(name, "domain.pddl"))
    problems = [parse_problem(_text(name, f), domain)
                for f in bundle_files(name) if f.startswith("p") and f.endswith(".pddl")]
    return Bundle(name, domain, problems)
