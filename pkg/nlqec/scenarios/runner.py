"""Scenario runner wiring the numerical modules into reports.

:Usage example:

.. code-block:: python

    from nlqec.scenarios import ScenarioRunner, get_scenario

    report = ScenarioRunner(get_scenario("example4_cat")).recover()
    print(report.recovery.branch_fidelity)
"""

import math
import time
from functools import cached_property

import numpy as np

import nlqec
from nlqec.alphabets import SqueezedCoherentFamily, build_family, sample_parameters
from nlqec.antypes import (
    CriterionReport,
    CriterionSolution,
    DiagnosticsInfo,
    DomainAxis,
    FamilyKind,
    FockSpace,
    GammaAlternativeInfo,
    KLReductionInfo,
    KrausChannel,
    QubitRegister,
    RecoveryChannel,
    RecoveryReport,
    RecoveryStrategy,
    Report,
    SampleSet,
    ScenarioConfig,
    Verdict,
    VTensor,
    to_pair,
)
from nlqec.channels import build_channel, transform_channel
from nlqec.core.errors import ZeroTrace
from nlqec.core.logs import get_logger
from nlqec.criterion import (
    approximate_metrics,
    build_v_tensor,
    kl_reduction_check,
    necessary_condition_check,
    solve_factorization,
    squeezed_diagnostics,
    verdict,
)
from nlqec.hilbert import default_cutoff, truncation_defect
from nlqec.interfaces import IAlphabetFamily
from nlqec.recovery import (
    apply_channel,
    apply_recovery,
    branch_fidelity,
    build_code_projector,
    build_identity_recovery,
    build_isometries,
    build_recovery,
    identity_lambda_table,
    lambda_defects,
    lambda_table,
    mixed_state_recovery_check,
    projector_algebra_defect,
    recovery_fidelity,
)

logger = get_logger("nlqec.scenarios")


def _pairs(m: np.ndarray) -> list[list[tuple[float, float]]]:
    return [[to_pair(z) for z in row] for row in np.asarray(m)]


def _reach(axis: DomainAxis) -> float:
    values = axis.values or [axis.low, axis.high]
    return max(abs(v) for v in values)


def alpha_reach(config: ScenarioConfig) -> float:
    """Largest displacement amplitude a bosonic scenario can sample."""
    alphabet = config.alphabet
    if alphabet.sampler.explicit:
        return max(math.hypot(*row[:2]) for row in alphabet.sampler.explicit)
    template = build_family(alphabet, FockSpace(n_max=1))
    axes = template.default_domain() | alphabet.domain
    return math.hypot(_reach(axes["re"]), _reach(axes["im"]))


def build_space(config: ScenarioConfig) -> FockSpace | QubitRegister:
    """
    Hilbert space of a scenario

    A Fock space without ``n_max`` gets the default cutoff for the largest
    sampled amplitude and the squeezing ``r`` of the alphabet.
    """
    space = config.space
    if space.kind == "qubits":
        return QubitRegister(n_qubits=space.n_qubits)
    n_max = space.n_max
    if n_max is None:
        squeeze_r = config.alphabet.fixed.get("r", 0.0)
        n_max = default_cutoff(alpha_reach(config), squeeze_r, space.guard_band)
    return FockSpace(
        n_max=n_max, guard_band=space.guard_band, trunc_tol=space.trunc_tol
    )


class ScenarioRunner:
    """
    Runs the criterion and recovery pipelines of one scenario config.

    Space, alphabet samples, channel and factorization are built on first use
    and shared between :meth:`check` and :meth:`recover`.

    :param config: validated scenario config
    :type config: ScenarioConfig
    :param seed: overrides ``config.seed`` when given, defaults to None
    :type seed: int | None, optional
    """

    def __init__(self, config: ScenarioConfig, seed: int | None = None):
        self.config = config
        self.seed = config.seed if seed is None else seed
        self.warnings: list[str] = []
        self._started = time.perf_counter()

    @cached_property
    def space(self) -> FockSpace | QubitRegister:
        return build_space(self.config)

    @cached_property
    def family(self) -> IAlphabetFamily:
        return build_family(self.config.alphabet, self.space)

    @cached_property
    def samples(self) -> SampleSet:
        sampler = self.config.alphabet.sampler
        samples = sample_parameters(
            self.family,
            sampler.strategy,
            count=sampler.count,
            seed=self.seed if sampler.seed is None else sampler.seed,
            domain=self.config.alphabet.domain,
            explicit=sampler.explicit,
            rank_tol=sampler.rank_tol,
            max_total=sampler.max_total,
        )
        if samples.pruned:
            self.warnings.append(f"Pruned {samples.pruned} near-duplicate samples")
        return samples

    @property
    def bosonic(self) -> bool:
        return isinstance(self.space, FockSpace)

    @cached_property
    def channel(self) -> KrausChannel:
        alpha_max = None
        if self.bosonic:
            amplitudes = np.hypot(self.samples.params[:, 0], self.samples.params[:, 1])
            alpha_max = float(np.max(amplitudes))
        return build_channel(self.config.channel, self.space, alpha_max)

    @cached_property
    def v(self) -> VTensor:
        return build_v_tensor(self.channel, self.samples)

    @cached_property
    def solution(self) -> CriterionSolution:
        solution = solve_factorization(self.v, self.config.solver, self.seed)
        self.warnings.extend(solution.warnings)
        return solution

    @property
    def verdict(self) -> Verdict:
        return verdict(self.solution, self.config.solver)

    def _diagnostics(self) -> DiagnosticsInfo:
        truncation = 0.0
        if self.bosonic:
            truncation = max(
                truncation_defect(psi, self.space.guard_band)
                for psi in self.samples.states.T
            )
        tp_tol = self.config.solver.tp_tol
        return DiagnosticsInfo(
            dim=self.space.dim,
            n_max=self.space.n_max if self.bosonic else None,
            k_max=self.channel.k_max,
            sample_count=self.samples.count,
            samples_pruned=self.samples.pruned,
            params=self.samples.params.tolist(),
            truncation_defect_max=truncation,
            tp_defect=self.channel.tp_defect,
            trace_preserving=self.channel.is_trace_preserving(tp_tol),
        )

    def _criterion(self) -> CriterionReport:
        options = self.config.solver
        sol = self.solution
        metrics = approximate_metrics(self.v, sol, options)
        _, necessary = necessary_condition_check(self.v, options)

        squeezed = None
        if isinstance(self.family, SqueezedCoherentFamily):
            squeezed = squeezed_diagnostics(self.samples, self.family.xi, self.space)
        kl = None
        if self.family.kind is FamilyKind.KL_CODEWORD:
            reduction = kl_reduction_check(
                self.config.alphabet.codewords, self.channel, options, seed=self.seed
            )
            kl = KLReductionInfo(
                holds=reduction.holds,
                codeword_defect=reduction.codeword_defect,
                offdiag_defect=reduction.offdiag_defect,
                residual_rel=reduction.residual_rel,
                coefficient_spread=reduction.coefficient_spread,
            )

        return CriterionReport(
            verdict=self.verdict.name.lower(),
            residual_rel=sol.residual_rel,
            gamma=np.asarray(sol.gamma, dtype=int).tolist(),
            blocks=[list(block) for block in sol.blocks],
            c=_pairs(sol.c),
            u=_pairs(sol.u),
            zero_mask=[bool(flag) for flag in sol.zero_mask],
            reference_sample=sol.reference_sample,
            iterations=sol.iterations,
            converged=sol.converged,
            degenerate_spectrum=sol.degenerate_spectrum,
            gamma_consistent=sol.gamma_consistent,
            dichotomy_ok=sol.dichotomy_ok,
            epsilon_max=metrics.epsilon_max,
            epsilon_ratio_max=metrics.ratio_max,
            orthogonality_defect=metrics.orthogonality_defect,
            gamma_alternatives=[
                GammaAlternativeInfo(
                    gamma=np.asarray(alt.gamma, dtype=int).tolist(),
                    residual_rel=alt.residual_rel,
                )
                for alt in sol.gamma_alternatives
            ],
            necessary=necessary,
            squeezed=squeezed,
            kl_reduction=kl,
        )

    def _report(self, command: str, **sections) -> Report:
        return Report(
            tool_version=nlqec.__version__,
            command=command,
            scenario=self.config.name,
            seed=self.seed,
            exit_code=self.verdict.value,
            config=self.config.model_dump(mode="json", exclude_none=True),
            diagnostics=self._diagnostics(),
            warnings=list(dict.fromkeys(self.warnings)),
            wall_time_s=time.perf_counter() - self._started,
            **sections,
        )

    def check(self) -> Report:
        """Criterion report; the exit code follows the verdict."""
        criterion = self._criterion()
        logger.info(
            f"Checked scenario [{self.config.name}] [verdict = {criterion.verdict}] "
            f"[residual = {criterion.residual_rel:.3e}]"
        )
        return self._report("check", criterion=criterion)

    def build_recovery(self) -> tuple[RecoveryChannel, np.ndarray, list[np.ndarray]]:
        """
        Recovery channel, its lambda table and the operators whose branch
        fidelities are reported

        The sampled strategy uses one transformed error per block; the identity
        strategy uses the channel's own Kraus operators.
        """
        options = self.config.solver
        projector = build_code_projector(
            self.samples, self.config.alphabet.sampler.rank_tol
        )
        strategy = RecoveryStrategy(self.config.recovery.strategy)
        if strategy is RecoveryStrategy.IDENTITY:
            rec = build_identity_recovery(projector, self.channel.n_ops)
            table = identity_lambda_table(self.channel, self.samples)
            return rec, table, list(self.channel.ops)

        isometries = build_isometries(
            self.solution, self.channel, self.samples, options
        )
        rec = build_recovery(isometries, projector, options)
        table = lambda_table(self.solution, rec.blocks)
        transformed = transform_channel(self.channel, self.solution.u, options.eig_tol)
        branches = [transformed.ops[n] for n in isometries.representatives]
        return rec, table, branches

    def _branch_row(self, op: np.ndarray) -> list[float]:
        row = []
        for psi in self.samples.states.T:
            try:
                row.append(branch_fidelity(psi, op))
            except ZeroTrace:
                row.append(float("nan"))
        return row

    def _recovery(self) -> RecoveryReport:
        rec, table, branches = self.build_recovery()
        channel, samples = self.channel, self.samples
        defects = lambda_defects(rec, channel, samples, table)

        fidelity, probability = [], []
        for psi in samples.states.T:
            f, p = recovery_fidelity(psi, channel, rec)
            fidelity.append(f)
            probability.append(p)

        trace_defect, mixed = None, None
        if channel.is_trace_preserving(self.config.solver.tp_tol):
            trace_defect = 0.0
            for psi in samples.states.T:
                rho = np.outer(psi, psi.conj())
                corrupted = apply_channel(channel, rho)
                recovered = apply_recovery(rec, corrupted)
                gap = abs(np.trace(recovered) - np.trace(corrupted))
                trace_defect = max(trace_defect, float(gap))
            mixed = mixed_state_recovery_check(
                rec,
                channel,
                self.config.recovery.mixture_weights,
                samples,
                self.config.solver.mixed_tol,
                self.config.solver.tp_tol,
            ).defect

        return RecoveryReport(
            strategy=rec.strategy.value,
            blocks=[list(block) for block in rec.blocks],
            includes_r0=rec.includes_r0,
            isometry_defect=rec.isometry_defect,
            block_equality_defect=rec.block_equality_defect,
            completeness_defect=rec.completeness_defect,
            projector_algebra_defect=projector_algebra_defect(rec),
            lambda_defect_max=float(np.max(defects)) if defects.size else 0.0,
            lambda_norm=np.sum(np.abs(table) ** 2, axis=(0, 1)).tolist(),
            fidelity=fidelity,
            probability=probability,
            branch_fidelity=[self._branch_row(op) for op in branches],
            trace_defect_max=trace_defect,
            mixed_defect=mixed,
        )

    def recover(self) -> Report:
        """
        Criterion and recovery report

        The sampled recovery needs a factorization within ``approx_ceiling``;
        on a failed verdict the recovery section is left out.
        """
        criterion = self._criterion()
        sampled = self.config.recovery.strategy == RecoveryStrategy.SAMPLED.value
        if sampled and self.verdict is Verdict.FAIL:
            message = "Recovery skipped, the criterion does not hold"
            logger.warning(f"{message} [{self.config.name}]")
            self.warnings.append(message)
            return self._report("recover", criterion=criterion)

        recovery = self._recovery()
        logger.info(
            f"Recovered scenario [{self.config.name}] "
            f"[min fidelity = {min(recovery.fidelity):.6f}] "
            f"[blocks = {len(recovery.blocks)}]"
        )
        return self._report("recover", criterion=criterion, recovery=recovery)
