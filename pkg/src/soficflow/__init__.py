"""Flow-equivalence tools for irreducible sofic shifts presented by labeled graphs."""
from soficflow.presentation import (SymbolicPresentation, ValidationReport, parse, render,
                                    reverse, symbol_expand, trim, validate)
from soficflow.fischer import FischerCover, as_cover, fischer_cover, verify_fischer
from soficflow.tupleflow import (ShiftClassReport, TupleGraph, analyze, build_tuple_graph,
                                 classify, trim_tuple_graph)

__version__ = "0.1.0"
