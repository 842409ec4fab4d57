from .grid_file import GridFile, export_plot_data, parse_grid, read_csv_export, read_grid, write_grid
from .manifest_file import MANIFEST_NAME, file_entry, read_manifest, write_manifest
