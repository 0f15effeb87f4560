"""Physical constants pinned to exact SI (2019) values, shared by all modules."""

HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23  # J/K
