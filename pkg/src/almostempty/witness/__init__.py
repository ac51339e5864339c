from .fans import discrepancy_witness, lemma3_bound, star_fan, theorem1_witness
from .order import OrderTriangulation, order_target, order_triangulate, order_triangulate_exhaustive
from .report import Comparison, Trace, WitnessReport, certify
from .theorem2 import FanDecomposition, TbSplit, fan_decompose, tb_split, theorem2_run
