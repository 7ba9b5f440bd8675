# :coding: utf-8

"""Common symbols."""

#: Version of the design file and report formats.
FORMAT_VERSION = 1

#: High threshold voltage variant.
HIGH_VTH = "high_vth"

#: Low threshold voltage variant.
LOW_VTH = "low_vth"

#: MT-cell variant before switch insertion (no VGND port).
MT_NO_VGND = "mt_no_vgnd"

#: MT-cell variant with a VGND port connected to a shared switch.
MT_WITH_VGND = "mt_with_vgnd"

#: Conventional MT-cell variant with built-in switch and holder.
MT_BUILT_IN = "mt_built_in"

#: Ordered list of all threshold variants.
VARIANTS = [HIGH_VTH, LOW_VTH, MT_NO_VGND, MT_WITH_VGND, MT_BUILT_IN]

#: Variants which are characterized by their own record in the library.
CHARACTERIZED_VARIANTS = [HIGH_VTH, LOW_VTH]

#: Variants behaving as MT-cells.
MT_VARIANTS = {MT_NO_VGND, MT_WITH_VGND, MT_BUILT_IN}

#: Logic function tags.
INV = "INV"
NAND2 = "NAND2"
NOR2 = "NOR2"
AND2 = "AND2"
BUF = "BUF"
DFF = "DFF"
HOLDER = "HOLDER"
SWITCH = "SWITCH"
MTEBUF = "MTEBUF"

#: Ordered list of all function tags.
FUNCTIONS = [INV, NAND2, NOR2, AND2, BUF, DFF, HOLDER, SWITCH, MTEBUF]

#: Functions computing logic values.
LOGIC_FUNCTIONS = {INV, NAND2, NOR2, AND2, BUF, DFF}

#: Functions which are allowed to sink the MTE control tree.
MTE_FUNCTIONS = {HOLDER, SWITCH, MTEBUF}

#: Functions which are never candidates for threshold replacement.
FIXED_FUNCTIONS = {DFF, HOLDER, SWITCH, MTEBUF}

#: Name of the MTE pin on holders, switches and conventional MT-cells.
MTE_PIN = "MTE"

#: Name of the held pin on holders.
HOLDER_PIN = "A"

#: Flow stage tags in execution order.
STAGE_INPUT = "input"
STAGE_ALL_LOW = "all_low"
STAGE_ASSIGNED = "assigned"
STAGE_SWITCHED = "switched"
STAGE_CLUSTERED = "clustered"
STAGE_ROUTED = "routed"
STAGE_REOPTIMIZED = "reoptimized"
STAGE_FINAL = "final"
STAGE_CONVENTIONAL = "conventional"

#: Ordered list of all flow stages.
STAGES = [
    STAGE_INPUT, STAGE_ALL_LOW, STAGE_ASSIGNED, STAGE_SWITCHED,
    STAGE_CLUSTERED, STAGE_ROUTED, STAGE_REOPTIMIZED, STAGE_FINAL,
    STAGE_CONVENTIONAL
]

#: Parasitics extraction stages.
PRE_ROUTE = "pre_route"
POST_ROUTE = "post_route"

#: Switch structure stages.
STRUCTURE_INITIAL = "initial"
STRUCTURE_CLUSTERED = "clustered"
STRUCTURE_REOPTIMIZED = "reoptimized"

#: Design styles compared by the flow.
DUAL_VTH_MODE = "dualvth"
CONVENTIONAL_MODE = "conventional"
IMPROVED_MODE = "improved"

#: Ordered list of all modes.
MODES = [DUAL_VTH_MODE, CONVENTIONAL_MODE, IMPROVED_MODE]

#: Column labels of the comparison table.
MODE_LABELS = {
    DUAL_VTH_MODE: "Dual-Vth",
    CONVENTIONAL_MODE: "Con.-SMT",
    IMPROVED_MODE: "Imp.-SMT",
}

#: Prefix of the terminal identifier of primary ports.
PORT_PREFIX = "port:"

#: History action for a completed flow stage.
FLOW_STAGE_ACTION = "FLOW_STAGE"

#: History action for a committed threshold swap.
VTH_SWAP_ACTION = "VTH_SWAP"

#: History action for a cluster split during re-optimization.
CLUSTER_SPLIT_ACTION = "CLUSTER_SPLIT"

#: History action for exception raised.
EXCEPTION_RAISE_ACTION = "RAISE_EXCEPTION"

#: Direction of primary ports.
INPUT = "input"
OUTPUT = "output"

#: Ordered fields of design constraints.
CONSTRAINT_FIELDS = [
    "t_clk", "hold_min", "v_dd", "v_bounce_max", "l_vgnd_max", "n_cells_max",
    "alpha", "k_bounce", "r0_switch", "l_sw", "a_sw", "w_min", "r_wire",
    "c_wire", "mte_max_fanout", "seed"
]

#: Constraint fields holding integer values.
INTEGER_CONSTRAINTS = {"n_cells_max", "mte_max_fanout", "seed"}
