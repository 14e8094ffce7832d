from .table import CurveTable, atomic_output, emit_csv, read_csv, write_csv
from .plot import axis_bounds, render_svg, emit_svg, emit_results, write_svg
