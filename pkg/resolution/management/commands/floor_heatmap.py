import numpy as np

from resolution.gaussian_geometry import epsilon_floor
from resolution.grids import GridSpec, grid_argument
from resolution.management.base import CSV_FLOAT, ResolutionCommand, input_error


class Command(ResolutionCommand):
    help = 'Ambiguity floor 1 - Phi(mu_max)^m over a (m, mu_max) grid, as CSV.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--m-grid', type=grid_argument, default=GridSpec(1, 20, 20),
                            help='lo:hi:n, rounded to distinct integers')
        parser.add_argument('--mu-max-grid', type=grid_argument, default=GridSpec(0.5, 4.0, 200),
                            help='lo:hi:n[:linear|log]')
        parser.add_argument('--out', help='CSV output path')

    def run(self, **options):
        dims = self.grid(options, 'm_grid').integer_values()
        if dims.size == 0 or dims.min() < 1:
            raise input_error('m grid must contain positive integers')
        margins = self.grid(options, 'mu_max_grid').values()
        blocks = self.sweep_rows(lambda m: epsilon_floor(m, margins), list(dims))
        rows = np.column_stack([
            np.repeat(dims, margins.size),
            np.tile(margins, dims.size),
            np.concatenate(blocks),
        ])
        self.emit_table(['m', 'mu_max', 'epsilon_min'], rows, ['%d', CSV_FLOAT, CSV_FLOAT], options)
