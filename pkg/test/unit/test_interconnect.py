# :coding: utf-8

import collections

import pytest

import smtflow.exception
import smtflow.interconnect
import smtflow.symbol
import smtflow.timing


@pytest.fixture()
def switch_design(create_design):
    """Return factory creating a design with *count* switches on a grid."""
    def _create(count, **constraints):
        return create_design(
            [
                (
                    "sw{}".format(index + 1), "SWITCH", "high_vth",
                    ((index % 20) * 1000, (index // 20) * 1000),
                    {"MTE": "mte"}
                )
                for index in range(count)
            ],
            [],
            die=(0, 0, 20000, 20000),
            constraints=constraints
        )

    return _create


def _mte_fanouts(design):
    """Return mapping of MTE tree nets to their number of sinks."""
    return {
        net: len(design.sinks(net)) for net in sorted(design.mte_tree_nets())
    }


def test_estimate_rc_preroute(create_design):
    """Estimate parasitics from the half-perimeter wire length."""
    design = create_design(
        [("u1", "INV", "low_vth", (3000, 4000), {"A": "a", "Y": "y"})],
        [
            ("a", "a", "input", (0, 0)),
            ("y", "y", "output", (3000, 4000)),
        ]
    )

    parasitics = smtflow.interconnect.estimate_rc_preroute(design, "a")
    assert parasitics.routed_length == 7.0
    assert parasitics.r_net == pytest.approx(1.4)
    assert parasitics.c_net == pytest.approx(0.7)
    assert parasitics.stage == "pre_route"

    # Coincident terminals give a net without wire.
    parasitics = smtflow.interconnect.estimate_rc_preroute(design, "y")
    assert parasitics == smtflow.timing.NetParasitics(
        0.0, 0.0, 0.0, "pre_route"
    )


def test_estimate_rc_preroute_three_terminals(create_design):
    """Estimate parasitics of a net with three terminals."""
    design = create_design(
        [
            ("u1", "INV", "low_vth", (2000, 0), {"A": "a", "Y": "y1"}),
            ("u2", "INV", "low_vth", (0, 5000), {"A": "a", "Y": "y2"}),
        ],
        [
            ("a", "a", "input", (0, 0)),
            ("y1", "y1", "output", (2000, 0)),
            ("y2", "y2", "output", (0, 5000)),
        ]
    )

    parasitics = smtflow.interconnect.estimate_rc_preroute(design, "a")
    assert parasitics.routed_length == 7.0


def test_estimate_rc_preroute_scaling(chain_design):
    """Scale parasitics with wire resistance and capacitance."""
    parasitics1 = smtflow.interconnect.estimate_all(chain_design())
    parasitics2 = smtflow.interconnect.estimate_all(
        chain_design(r_wire=0.4, c_wire=0.2)
    )

    for net, value in parasitics1.items():
        assert parasitics2[net].r_net == pytest.approx(2 * value.r_net)
        assert parasitics2[net].c_net == pytest.approx(2 * value.c_net)


def test_estimate_all(chain_design):
    """Estimate parasitics of every net."""
    parasitics = smtflow.interconnect.estimate_all(chain_design())

    assert list(parasitics.keys()) == ["a", "mte", "n1", "n2", "y"]
    assert parasitics["a"].routed_length == 12.0
    assert parasitics["n1"].routed_length == 6.0
    assert parasitics["mte"].routed_length == 0.0


def test_detour():
    """Return deterministic detour factors within range."""
    factors = [
        smtflow.interconnect.detour(42, "n{}".format(index))
        for index in range(200)
    ]

    assert all(1.0 <= factor < 1.25 for factor in factors)
    assert len(set(factors)) > 1

    assert smtflow.interconnect.detour(42, "n1") == factors[1]
    assert smtflow.interconnect.detour(42, "n1", detour_max=0.0) == 1.0
    assert smtflow.interconnect.detour(
        42, "n1", detour_max=0.5
    ) == pytest.approx(1.0 + 2 * (factors[1] - 1.0))


def test_extract_rc_postroute(chain_design):
    """Extract post-route parasitics from the detour model."""
    design = chain_design(seed=3)
    preroute = smtflow.interconnect.estimate_all(design)
    postroute = smtflow.interconnect.extract_all(design)

    for net, value in postroute.items():
        assert value.stage == "post_route"
        assert value.routed_length >= preroute[net].routed_length
        assert value.routed_length <= preroute[net].routed_length * 1.25
        assert value == smtflow.interconnect.extract_rc_postroute(
            design, net, seed=3
        )

    assert postroute["mte"].routed_length == 0.0

    factor = smtflow.interconnect.detour(3, "n1")
    assert postroute["n1"].routed_length == pytest.approx(6.0 * factor)
    assert postroute["n1"].r_net == pytest.approx(0.2 * 6.0 * factor)


def test_extract_rc_postroute_seed(chain_design):
    """Extract different parasitics with another seed."""
    design = chain_design()

    lengths1 = [
        value.routed_length
        for value in smtflow.interconnect.extract_all(design, seed=1).values()
    ]
    lengths2 = [
        value.routed_length
        for value in smtflow.interconnect.extract_all(design, seed=2).values()
    ]

    assert lengths1 != lengths2


def test_guard_band(chain_design):
    """Scale parasitics by the worst detour factor."""
    design = chain_design()
    preroute = smtflow.interconnect.estimate_all(design)
    guarded = smtflow.interconnect.guard_band(preroute)
    postroute = smtflow.interconnect.extract_all(design)

    assert guarded["a"].routed_length == pytest.approx(15.0)
    assert guarded["a"].stage == "pre_route"

    for net, value in postroute.items():
        assert value.routed_length <= guarded[net].routed_length
        assert value.c_net <= guarded[net].c_net + 1e-12


@pytest.mark.parametrize("count, buffers", [
    (0, 0),
    (10, 0),
    (16, 0),
    (17, 2),
    (40, 3),
    (300, 21),
], ids=[
    "empty",
    "direct",
    "maximum-fanout",
    "one-level",
    "three-leaves",
    "two-levels",
])
def test_buffer_mte(switch_design, count, buffers):
    """Build MTE buffer tree within maximum fanout."""
    design = switch_design(count)
    buffered = smtflow.interconnect.buffer_mte(design)

    mtebufs = buffered.cells_by_function(smtflow.symbol.MTEBUF)
    assert len(mtebufs) == buffers

    fanouts = _mte_fanouts(buffered)
    assert all(fanout <= 16 for fanout in fanouts.values())
    assert len(fanouts) == buffers + 1

    # Each switch is driven by exactly one MTE tree net.
    drivers = collections.Counter(
        buffered.cells[identifier].pins["MTE"]
        for identifier in buffered.cells_by_function(smtflow.symbol.SWITCH)
    )
    assert sum(drivers.values()) == count
    assert set(drivers.keys()) <= set(fanouts.keys())

    # The input design is left untouched.
    assert design.cells_by_function(smtflow.symbol.MTEBUF) == []


def test_buffer_mte_levels(switch_design):
    """Build MTE buffer tree recursively."""
    buffered = smtflow.interconnect.buffer_mte(switch_design(300))

    root = buffered.sinks("mte")
    assert len(root) == 2
    assert all(
        buffered.function(terminal.identifier) == smtflow.symbol.MTEBUF
        for terminal in root
    )

    leaves = [
        identifier
        for identifier in buffered.cells_by_function(smtflow.symbol.MTEBUF)
        if buffered.cells[identifier].pins["A"] != "mte"
    ]
    assert len(leaves) == 19

    for identifier in buffered.cells_by_function(smtflow.symbol.MTEBUF):
        assert buffered.cells[identifier].variant == "high_vth"


def test_buffer_mte_rebuild(switch_design):
    """Rebuild MTE buffer tree from scratch."""
    buffered = smtflow.interconnect.buffer_mte(switch_design(40))
    rebuilt = smtflow.interconnect.buffer_mte(buffered)

    assert rebuilt == buffered


def test_buffer_mte_small_fanout(switch_design):
    """Fail to build MTE buffer tree with a maximum fanout below 2."""
    with pytest.raises(smtflow.exception.ContractError):
        smtflow.interconnect.buffer_mte(switch_design(3, mte_max_fanout=1))
