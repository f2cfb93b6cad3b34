"""Batch closed-form vs oracle verification."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

from src.physics.models import (
    EllRule,
    OracleConfig,
    OracleResult,
    QuantumState,
    RadialProblem,
    VerificationReport,
)
from src.physics.oracle import default_config, report_from_result, solve_problem
from src.utils.cache import SimpleCache
from src.utils.config import get_settings
from src.utils.performance import measure_time


logger = logging.getLogger(__name__)


class VerificationService:
    """Runs one oracle solve per angular momentum and compares every level."""

    def __init__(
        self,
        cfg: Optional[OracleConfig] = None,
        max_workers: Optional[int] = None,
        cache: Optional[SimpleCache] = None,
    ):
        """Initialize verification service.

        Args:
            cfg: Oracle configuration; ``states_requested`` is raised as needed
            max_workers: Thread count for independent l values
            cache: Result cache shared between calls
        """
        self.settings = get_settings()
        self.cfg = cfg or default_config()
        self.max_workers = max_workers or self.settings.max_workers
        if cache is None:
            cache = SimpleCache(self.settings.cache_ttl)
        self.cache = cache

    def solve(self, problem: RadialProblem, ell: int, states: int) -> OracleResult:
        """Oracle levels n = 0..states-1 at angular momentum l, cached."""
        cfg = self.cfg.model_copy(
            update={"states_requested": max(states, self.cfg.states_requested)}
        )
        key = (problem.cache_key(), ell, cfg.cache_key())
        result = self.cache.get(key)
        if result is None:
            result = solve_problem(problem, ell, cfg)
            self.cache.set(key, result)
        return result

    @measure_time
    def verify_spectrum(
        self,
        problem: RadialProblem,
        n_max: int,
        tolerance: Optional[float] = None,
        ell_rule: Optional[EllRule] = None,
    ) -> List[VerificationReport]:
        """Reports for every tabulated (n, l), sorted by (n, l)."""
        rule = ell_rule or EllRule()
        wanted: Dict[int, List[int]] = {}
        for n in range(n_max + 1):
            for ell in rule.ells(n):
                wanted.setdefault(ell, []).append(n)

        def verify_ell(ell: int) -> List[VerificationReport]:
            result = self.solve(problem, ell, max(wanted[ell]) + 1)
            return [
                report_from_result(
                    problem, QuantumState(n=n, ell=ell), result, tolerance
                )
                for n in wanted[ell]
            ]

        logger.info(
            f"Verifying {sum(len(ns) for ns in wanted.values())} states "
            f"over {len(wanted)} l values with {self.max_workers} worker(s)"
        )
        if self.max_workers > 1 and len(wanted) > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                batches = list(pool.map(verify_ell, sorted(wanted)))
        else:
            batches = [verify_ell(ell) for ell in sorted(wanted)]

        reports = [report for batch in batches for report in batch]
        return sorted(reports, key=lambda r: (r.state.n, r.state.ell))
