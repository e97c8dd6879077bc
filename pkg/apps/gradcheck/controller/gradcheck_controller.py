# -*- coding: utf-8 -*-
from pathlib import Path
from loguru import logger
from apps.gradcheck.checks import GradCheckSuite
from apps.gradcheck.checks import run_gradcheck
from config.exceptions import GradientCheckFailed
from config.run_config import RunConfig
from config.server import prepare_run_dir
from config.settings import RUN_FILES
from extensions.cli.options import AblateDiffOpt
from extensions.cli.options import AblateResidualOpt
from extensions.cli.options import ConfigOpt
from extensions.cli.options import OutOpt
from extensions.cli.options import PerTimestepOpt
from extensions.cli.options import SeedOpt
from extensions.cli.options import collect_overrides
from extensions.cli.runner import run_command
from extensions.report.report import Report
from extensions.report.report import STATUS_FAILED
from extensions.report.report import STATUS_OK


def run_gradcheck_report(config: RunConfig) -> GradCheckSuite:
    """Corre la verificación, escribe gradcheck.json y falla si algún parámetro supera la tolerancia."""
    suite = run_gradcheck(config.gradcheck, config.model, config.seed)
    run_dir = prepare_run_dir(Path(config.out_dir))
    failing = suite.failing
    coverage = suite.coverage()
    if not coverage['exhaustive']:
        logger.warning(
            f"⚠️ Verificación muestreada: {coverage['entries_checked']} de {coverage['entries_total']} entradas "
            f"({coverage['entries_per_parameter']} por parámetro); use gradcheck.entries_per_parameter: null para todas"
        )

    if failing:
        Report.write(
            run_dir / RUN_FILES['GRADCHECK'],
            status=STATUS_FAILED,
            message=f'{len(failing)} parámetros fuera de tolerancia',
            data=suite.as_dict(),
            errors={'failing': failing},
        )
        raise GradientCheckFailed(
            f"Gradientes fuera de tolerancia ({config.gradcheck.tolerance:.0e}): {', '.join(failing)}",
            failing=failing,
        )

    Report.write(
        run_dir / RUN_FILES['GRADCHECK'],
        status=STATUS_OK,
        message=(
            f'Error relativo máximo {suite.max_relative_error:.3e} sobre '
            f"{coverage['entries_checked']} de {coverage['entries_total']} entradas"
        ),
        data=suite.as_dict(),
    )
    logger.info(f'✅ Todos los gradientes dentro de tolerancia (máx {suite.max_relative_error:.3e})')
    return suite


def gradcheck_command(
    config: ConfigOpt = None,
    out: OutOpt = None,
    seed: SeedOpt = None,
    ablate_diff_attention: AblateDiffOpt = False,
    ablate_residual_layer: AblateResidualOpt = False,
    per_timestep_fusion_weights: PerTimestepOpt = False,
):
    """Compara gradientes analíticos con diferencias centrales, por capa y en el micro-modelo completo."""
    overrides = collect_overrides(
        out=out, seed=seed,
        ablate_diff_attention=ablate_diff_attention,
        ablate_residual_layer=ablate_residual_layer,
        per_timestep_fusion_weights=per_timestep_fusion_weights,
    )
    run_command('gradcheck', run_gradcheck_report, config, overrides)
