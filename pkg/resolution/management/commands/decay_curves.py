import numpy as np

from resolution.gaussian_geometry import (
    HalfSpaceCurve, OrthantPolytope, PolytopeCurve, PrecisionLimit,
    ambiguity_floor, ambiguity_vs_info_curve,
)
from resolution.grids import GridSpec, grid_argument
from resolution.management.base import CSV_FLOAT, ResolutionCommand, worker_count

DEFAULT_MU_MAX = 2.13


class Command(ResolutionCommand):
    help = 'Best attainable ambiguity versus information for a half-space and an orthant polytope, as CSV.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--delta0', type=float, default=0.0,
                            help='signed Mahalanobis distance of the prior mean to the half-space boundary')
        parser.add_argument('--m', type=int, default=5, help='polytope dimension')
        parser.add_argument('--a', type=float, default=1.0, help='polytope threshold')
        parser.add_argument('--sigma0', type=float, default=1.0, help='prior standard deviation')
        parser.add_argument('--sigma-min', type=float, default=None,
                            help=f'precision limit; defaults to a / {DEFAULT_MU_MAX}')
        parser.add_argument('--info-grid', type=grid_argument, default=GridSpec(0.0, 50.0, 201),
                            help='lo:hi:n[:linear|log] in nats')
        parser.add_argument('--out', help='CSV output path')

    def run(self, **options):
        polytope = OrthantPolytope(options['m'], options['a'])
        sigma_min = options['sigma_min']
        limit = PrecisionLimit(sigma_min) if sigma_min is not None else PrecisionLimit.from_margin(polytope, DEFAULT_MU_MAX)
        info = self.grid(options, 'info_grid').values()
        workers = worker_count()

        halfspace = ambiguity_vs_info_curve(HalfSpaceCurve(options['delta0']), info, workers=workers)
        polytope_curve = ambiguity_vs_info_curve(PolytopeCurve(options['sigma0'], polytope, limit), info,
                                                 workers=workers)
        stalled = [p.info_nats for p in polytope_curve if not p.converged]
        if stalled:
            self.stderr.write(f'sigma(I) solver did not converge at I = {stalled}')

        floor = ambiguity_floor(polytope, limit).epsilon_min
        rows = np.column_stack([
            info,
            [p.ambiguity for p in halfspace],
            [p.ambiguity for p in polytope_curve],
            np.full(info.size, floor),
        ])
        self.emit_table(['info_nats', 'halfspace_ambiguity', 'polytope_ambiguity', 'floor'], rows, CSV_FLOAT,
                        options)
