"""Experiment orchestration, file formats and the command line."""

from hllab.harness.scan import (
    FitResult,
    LittlewoodReport,
    ScanRecord,
    diagonal_closed_form,
    diagonal_ratio_exponent,
    fit_loglog,
    fit_records,
    littlewood_check,
    littlewood_ratio,
    scan,
)
