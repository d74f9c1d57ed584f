"""End-to-end eraser run: preparation, GHZ circuit, both erasures, readout."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import decoherence as dc
from . import state_prep as sp
from . import tomography as tomo
from .dynamics import ConditionalRotation, PulseSequence, RFRotation, SpinSystem, alanine, conjugate, relax
from .spin_core import basis_state_labels, decompose, matrix_to_csv, matrix_to_json

#: Time spent turning the pseudo-pure state into the GHZ state (s).
GHZ_PREP_TIME = 0.021

CHECKPOINTS = ("ini", "ghz", "z", "x")


@dataclass
class ExperimentConfig:
    system_path: str | None = None
    slices: int = 64
    windings: float = 1.0
    relaxation: bool = False
    miscalibration: float = 0.0
    seed: int | None = None
    out_dir: str = "eraser_out"
    ghz_time: float = GHZ_PREP_TIME

    def __post_init__(self):
        if self.slices < 1:
            raise ValueError("slice count must be at least 1")
        if not 0 <= self.miscalibration <= 0.2:
            raise ValueError("miscalibration fraction must lie in [0, 0.2]")
        if self.ghz_time < 0:
            raise ValueError("GHZ preparation time must be non-negative")

    def system(self) -> SpinSystem:
        return SpinSystem.from_file(self.system_path) if self.system_path else alanine()

    @classmethod
    def from_file(cls, path, **overrides) -> "ExperimentConfig":
        """Load a JSON experiment config, or a bare spin-system file."""
        with open(path) as fh:
            obj = json.load(fh)
        if "shifts_hz" in obj:
            obj = {"system_path": str(path)}
        elif "system_path" in obj and obj["system_path"]:
            base = Path(path).parent
            obj["system_path"] = str(base / obj["system_path"])
        obj.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**obj)


def ghz_sequence() -> PulseSequence:
    """pi/2 y pulse on spin 2 followed by the two c-NOT factors."""
    return PulseSequence(
        3,
        [
            RFRotation((2,), "y", np.pi / 2),
            ConditionalRotation((1,), "-x", np.pi, 2, -1),
            ConditionalRotation((3,), "x", np.pi, 2, -1),
        ],
    )


def noisy_ghz(rho_ini: np.ndarray, cfg: ExperimentConfig, system: SpinSystem, rng=None) -> np.ndarray:
    """GHZ circuit with optional miscalibration and relaxation.

    Relaxation acts for ``cfg.ghz_time`` after the spin-2 pulse, while the
    transverse spin-2 magnetization drives the c-NOT pair.
    """
    seq = ghz_sequence()
    if cfg.miscalibration:
        seq = seq.miscalibrated(cfg.miscalibration, rng)
    pulse, cnots = seq.elements[0], PulseSequence(3, seq.elements[1:])
    rho = conjugate(pulse.unitary(3), rho_ini)
    if cfg.relaxation:
        rho = relax(rho, cfg.ghz_time, system)
    return conjugate(cnots.compile(), rho)


def ghz_retention(system: SpinSystem | None = None, t: float = GHZ_PREP_TIME) -> float:
    """Attenuated correlation of the relaxed GHZ state with the ideal one."""
    system = system or alanine()
    cfg = ExperimentConfig(relaxation=True, ghz_time=t)
    noisy = noisy_ghz(sp.pseudo_pure_target(), cfg, system)
    return tomo.attenuated_correlation(noisy, sp.ghz_target()).c


@dataclass
class EraserResult:
    states: dict[str, np.ndarray]
    reconstructed: dict[str, np.ndarray]
    reports: dict[str, tomo.CorrelationReport]
    tomo_reports: dict[str, tomo.CorrelationReport]
    residuals: dict[str, float]
    config: ExperimentConfig = field(repr=False, default=None)


def simulate(cfg: ExperimentConfig) -> EraserResult:
    system = cfg.system()
    rng = np.random.default_rng(cfg.seed) if cfg.seed is not None else None
    ens = dc.SpatialEnsemble(cfg.slices)
    kw = dict(area=cfg.windings, miscalibration=cfg.miscalibration, rng=rng)

    states = {"ini": sp.pseudo_pure_prep(sp.thermal_deviation(system))}
    states["ghz"] = noisy_ghz(states["ini"], cfg, system, rng)
    states["z"] = dc.selective_dephase_z(states["ghz"], ens, **kw)
    states["x"] = dc.selective_dephase_x(states["ghz"], ens, **kw)

    targets = sp.reference_states()
    reconstructed, residuals, reports, tomo_reports = {}, {}, {}, {}
    for name, rho in states.items():
        rec = tomo.reconstruct(tomo.simulate_tomography(rho))
        reconstructed[name] = rec.rho
        residuals[name] = rec.residual
        reports[name] = tomo.attenuated_correlation(rho, targets[name])
        tomo_reports[name] = tomo.attenuated_correlation(rec.rho, targets[name])
    return EraserResult(states, reconstructed, reports, tomo_reports, residuals, cfg)


def expansion_text(rho: np.ndarray, threshold: float = 1e-12) -> str:
    """Product-operator terms by descending magnitude, ties by label."""
    terms = sorted(decompose(rho, threshold), key=lambda t: (-round(abs(t.coefficient), 12), t.labels))
    return "".join(t.pretty() + "\n" for t in terms)


def bar_csv(rho: np.ndarray) -> str:
    labels = basis_state_labels(int(np.log2(rho.shape[0])))
    lines = ["row," + ",".join(labels)]
    for lab, row in zip(labels, np.real(rho)):
        lines.append(lab + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_artifacts(result: EraserResult, out_dir) -> list[Path]:
    out = Path(out_dir)
    os.makedirs(out, exist_ok=True)
    written = []

    def put(name: str, text: str) -> None:
        p = out / name
        p.write_text(text)
        written.append(p)

    for name in CHECKPOINTS:
        rho = result.states[name]
        put(f"rho_{name}.json", matrix_to_json(rho))
        put(f"rho_{name}.csv", matrix_to_csv(rho))
        put(f"rho_{name}_tomo.json", matrix_to_json(result.reconstructed[name]))
        put(f"expansion_{name}.txt", expansion_text(rho))
        put(f"bars_{name}.csv", bar_csv(rho))
    lines = [f"{name} {result.reports[name]}" for name in CHECKPOINTS]
    lines += [f"{name}_tomo {result.tomo_reports[name]}" for name in CHECKPOINTS]
    put("report.txt", "\n".join(lines) + "\n")
    summary = {
        "config": asdict(result.config) if result.config else None,
        "correlation": {k: asdict(v) for k, v in result.reports.items()},
        "tomography_correlation": {k: asdict(v) for k, v in result.tomo_reports.items()},
        "tomography_residual": result.residuals,
    }
    put("report.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return written


def run_eraser(cfg: ExperimentConfig) -> EraserResult:
    result = simulate(cfg)
    write_artifacts(result, cfg.out_dir)
    return result
