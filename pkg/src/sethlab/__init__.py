"""Instance transformations and exact solvers for the SETH-hardness web of
CNF-Sat, Hitting Set, Set Splitting, NAE-Sat, Set Cover, Steiner Tree,
Connected Vertex Cover, Set Partitioning and Subset Sum."""

__version__ = "0.1.0"
