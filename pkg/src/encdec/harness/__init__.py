"""Canonical operators, test families, convergence studies and the CLI."""

from .families import GaussianBumps, SineModes, family_by_name, make_family, sine_modes_lipschitz
from .operators import CanonicalOperator, OperatorName, canonical_apply, compose_operators, poisson_residual
from .report import render_svg, write_manifest, write_report_csv, write_svg
from .study import CodecPlan, StudyReport, StudyRow, convergence_study, identity_study

__all__ = [name for name in dir() if not name.startswith("_")]
