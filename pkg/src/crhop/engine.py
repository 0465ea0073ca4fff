"""Slotted discrete-event core.

Time advances in synchronized 1-second slots, each split into two half-slots
(two rendezvous attempts per slot). Within a half-slot:

1. every participating node asks its strategy for a channel;
2. each tuned channel's occupancy is sensed once at the half-slot start and
   nodes on busy channels sit the half-slot out entirely;
3. the idle nodes on a channel are grouped into clusters by radio
   connectivity restricted to that channel's tuned set;
4. each cluster elects one initiator uniformly among members that are still
   discovering or hold unconfirmed links; the initiator picks a responder
   among its in-range cluster members, preferring peers it has never
   handshaken over unconfirmed over confirmed ones;
5. the configured handshake runs atomically and the packet / rendezvous
   counters advance;
6. a lone incomplete node broadcasts an unanswered D-REQ (one packet);
7. nodes whose tables now cover all N-1 peers record their time to
   rendezvous, in half-slots, and drop to responder-only behavior.

A run is deterministic given (scenario, seed): all randomness flows through
labeled substreams of the run seed, and environment streams (topology,
channel assignment, channel occupancy) use labels that do not involve the
protocol or handshake, so paired runs share their environment.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .activity import ACTIVITY_CLASSES, OFF, ON, ChannelProcess, make_profile
from .errors import InvalidParameterError
from .handshake import (
    D_REQ,
    HANDSHAKE_KINDS,
    HANDSHAKE_SIZES,
    NeighborTables,
    run_handshake,
)
from .protocols import STRATEGY_KINDS, make_strategy
from .seeding import labeled_rng, root_sequence
from .spectrum import SpectrumMap, assign_channels
from .topology import Topology, from_positions, generate_topology

COMPLETION_MODES = ("active", "responder-only", "silent")

# Default geometry keeps rejection-sampled connected topologies reachable for
# up to ~20 nodes at 100 m range; see generate_topology's attempt budget.
DEFAULT_AREA = (400.0, 400.0)
DEFAULT_RANGE = 100.0


@dataclass(frozen=True)
class Scenario:
    """Full description of one simulation configuration."""

    nodes: int
    channels: int
    mode: str  # "sym" | "asym"
    activity: str
    protocol: str
    handshake: str
    m: int | None = None
    per_node_size: int | None = None
    area: tuple[float, float] = DEFAULT_AREA
    radio_range: float = DEFAULT_RANGE
    max_slots: int = 100_000
    completion_mode: str = "responder-only"
    emca_window: float = math.inf  # slots a completed memca node keeps responding
    # A node that has not confirmed a direct link cannot vouch for it, so by
    # default its snapshots withhold that link until a later handshake
    # confirms it. True shares tentative links immediately.
    share_unconfirmed_links: bool = False
    topology_attempts: int = 10_000
    rates_table: tuple[tuple[float, float], ...] | None = None
    positions: tuple[tuple[float, float], ...] | None = None

    def validate(self) -> None:
        if self.nodes < 1:
            raise InvalidParameterError(f"nodes must be >= 1, got {self.nodes}")
        if self.channels < 1:
            raise InvalidParameterError(f"channels must be >= 1, got {self.channels}")
        if self.mode not in ("sym", "asym"):
            raise InvalidParameterError(f"mode must be 'sym' or 'asym', got {self.mode!r}")
        if self.mode == "asym":
            k = self.channels if self.per_node_size is None else self.per_node_size
            if self.m is None or not (1 <= self.m <= k <= self.channels):
                raise InvalidParameterError(
                    f"asym mode needs 1 <= m <= per_node_size <= channels, got "
                    f"m={self.m}, per_node_size={k}, channels={self.channels}"
                )
        if self.activity not in ACTIVITY_CLASSES:
            raise InvalidParameterError(f"unknown activity class {self.activity!r}")
        if self.protocol not in STRATEGY_KINDS:
            raise InvalidParameterError(f"unknown protocol {self.protocol!r}")
        if self.handshake not in HANDSHAKE_KINDS:
            raise InvalidParameterError(f"unknown handshake {self.handshake!r}")
        if self.completion_mode not in COMPLETION_MODES:
            raise InvalidParameterError(f"unknown completion mode {self.completion_mode!r}")
        if self.max_slots < 1:
            raise InvalidParameterError(f"max_slots must be >= 1, got {self.max_slots}")
        if self.emca_window <= 0:
            raise InvalidParameterError("emca_window must be positive (use inf for unbounded)")
        if self.positions is not None and len(self.positions) != self.nodes:
            raise InvalidParameterError("positions, when given, must list every node")
        if self.rates_table is not None and len(self.rates_table) < 1:
            raise InvalidParameterError("rates_table override must not be empty")

    def environment_key(self) -> str:
        """Identity of everything the protocol/handshake axes must share.

        Used to derive run seeds; deliberately excludes protocol, handshake
        and termination knobs so paired comparisons reuse topology, channel
        assignment and occupancy traces.
        """
        if self.rates_table is None:
            rates_tag = "default"
        else:
            blob = repr(self.rates_table).encode("utf-8")
            rates_tag = hashlib.sha256(blob).hexdigest()[:12]
        if self.positions is None:
            pos_tag = "random"
        else:
            blob = repr(self.positions).encode("utf-8")
            pos_tag = hashlib.sha256(blob).hexdigest()[:12]
        k = self.channels if self.per_node_size is None else self.per_node_size
        return (
            f"N={self.nodes};C={self.channels};mode={self.mode};m={self.m};k={k};"
            f"act={self.activity};area={self.area[0]}x{self.area[1]};"
            f"range={self.radio_range};rates={rates_tag};pos={pos_tag}"
        )


@dataclass(frozen=True)
class RunRecord:
    """Bookkeeping of one run: per-node discovery times and traffic counts.

    `packets` counts every transmitted message once, including unanswered
    D-REQ broadcasts and repeat handshakes. `rendezvous` counts successful
    rendezvous events: handshakes between pairs meeting for the first time.
    A repeat handshake (e.g. the reverse exchange that confirms a two-way
    link) spends packets without adding a rendezvous, which is exactly the
    overhead PPR is meant to expose.
    """

    node_count: int
    handshake: str
    max_slots: int
    ttr_half_slots: tuple[int, ...]
    censored: tuple[bool, ...]
    packets: int
    rendezvous: int
    trace: tuple | None = None


class _Node:
    __slots__ = ("node_id", "strategy", "tables", "complete", "completion_slot", "ttr")

    def __init__(self, node_id, strategy):
        self.node_id = node_id
        self.strategy = strategy
        self.tables = NeighborTables(node_id)
        self.complete = False
        self.completion_slot = 0
        self.ttr = 0


def build_environment(scenario: Scenario, seed) -> tuple[Topology, SpectrumMap, dict[int, ChannelProcess]]:
    """Topology, channel assignment and occupancy processes for one run.

    A pure function of (environment axes, seed): the protocol and handshake
    choices never touch these streams.
    """
    scenario.validate()
    root = root_sequence(seed)
    if scenario.positions is not None:
        topo = from_positions(list(scenario.positions), scenario.radio_range)
    else:
        topo = generate_topology(
            scenario.nodes,
            scenario.area,
            scenario.radio_range,
            labeled_rng(root, "topology"),
            max_attempts=scenario.topology_attempts,
        )
    smap = assign_channels(
        scenario.nodes,
        scenario.channels,
        scenario.mode,
        labeled_rng(root, "channels"),
        m=scenario.m,
        per_node_size=scenario.per_node_size,
    )
    rates = make_profile(scenario.activity, scenario.channels, table=scenario.rates_table)
    processes = {
        ch: ChannelProcess(ch, rates[ch - 1], labeled_rng(root, f"pr/{ch}"))
        for ch in range(1, scenario.channels + 1)
    }
    return topo, smap, processes


def _clusters(member_ids: list[int], topology: Topology) -> list[list[int]]:
    """Connected components of the topology restricted to member_ids."""
    idset = set(member_ids)
    seen: set[int] = set()
    out = []
    for i in member_ids:
        if i in seen:
            continue
        comp = []
        stack = [i]
        seen.add(i)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in topology.neighbors[u]:
                if v in idset and v not in seen:
                    seen.add(v)
                    stack.append(v)
        out.append(sorted(comp))
    return out


def run(scenario: Scenario, seed, election=None, trace: bool = False) -> RunRecord:
    """Simulate one run to completion or the slot budget.

    `election`, when given, replaces the uniform election stream: it is
    called as election(tag, options) with tag "initiator" or "responder" and
    a nonempty id list, and must return one of the options. `trace` attaches
    the per-half-slot transcript to the returned record as rows of
    (slot, half, channel, kind, sender, receiver, pr_state).
    """
    topology, smap, processes = build_environment(scenario, seed)
    root = root_sequence(seed)
    n = scenario.nodes

    if election is None:
        elect_rng = labeled_rng(root, "election")

        def election(tag, options):
            return options[int(elect_rng.integers(len(options)))]

    nodes = [
        _Node(i, make_strategy(scenario.protocol, smap.available[i], labeled_rng(root, f"strategy/{i}")))
        for i in range(n)
    ]
    by_id = {nd.node_id: nd for nd in nodes}
    rows: list | None = [] if trace else None
    packets = 0
    rendezvous = 0
    met_pairs: set[tuple[int, int]] = set()

    for nd in nodes:
        if len(nd.tables.knowledge()) == n - 1:
            nd.complete = True

    def is_silent(nd: _Node, slot: int) -> bool:
        if not nd.complete:
            return False
        if scenario.completion_mode == "silent":
            return True
        if scenario.protocol == "memca" and slot > nd.completion_slot + scenario.emca_window:
            return True
        return False

    def may_initiate(nd: _Node) -> bool:
        if scenario.completion_mode == "active":
            return True
        return (not nd.complete) or bool(nd.tables.unconfirmed())

    def cluster_round(cluster_ids: list[int], channel: int, slot: int, half: int) -> None:
        nonlocal packets, rendezvous
        members = [by_id[i] for i in cluster_ids]
        eligible = [nd.node_id for nd in members if may_initiate(nd)]
        if not eligible:
            return
        if len(members) == 1:
            lone = members[0]
            if not lone.complete:
                packets += 1
                if rows is not None:
                    rows.append((slot, half, channel, D_REQ, lone.node_id, None, OFF))
            return
        init = by_id[election("initiator", eligible)]
        in_range = [i for i in cluster_ids if topology.adjacent(init.node_id, i)]
        # Responder preference: peers never heard of, then direct links still
        # awaiting confirmation, then peers known only indirectly, then
        # confirmed links. The unconfirmed tier is what sends a two-way
        # handshake's responder back toward that neighbor at later meetings.
        knowledge = init.tables.knowledge()
        unknown = [i for i in in_range if i not in knowledge]
        unconfirmed = [i for i in in_range if i in init.tables.dnl and i not in init.tables.confirmed]
        indirect = [i for i in in_range if i in init.tables.inl]
        confirmed = [i for i in in_range if i in init.tables.confirmed]
        tier = unknown or unconfirmed or indirect or confirmed
        responder = by_id[election("responder", tier)]
        transcript = run_handshake(
            scenario.handshake, init.tables, responder.tables, scenario.share_unconfirmed_links
        )
        packets += transcript.packets
        pair = (min(init.node_id, responder.node_id), max(init.node_id, responder.node_id))
        if pair not in met_pairs:
            met_pairs.add(pair)
            rendezvous += 1
        if rows is not None:
            for kind, s, r in transcript.messages:
                rows.append((slot, half, channel, kind, s, r, OFF))

    if not all(nd.complete for nd in nodes):
        done = False
        for slot in range(1, scenario.max_slots + 1):
            for half in (1, 2):
                t = (slot - 1) + (0.0 if half == 1 else 0.5)
                tuned: dict[int, list[int]] = {}
                for nd in nodes:  # id order keeps stream consumption stable
                    if is_silent(nd, slot):
                        continue
                    tuned.setdefault(nd.strategy.select(half), []).append(nd.node_id)
                for channel in sorted(tuned):
                    busy = processes[channel].is_busy(t)
                    if rows is not None:
                        for i in tuned[channel]:
                            rows.append((slot, half, channel, "TUNE", i, None, ON if busy else OFF))
                    if busy:
                        continue  # sensing gate: nobody transmits this half-slot
                    for cluster_ids in _clusters(tuned[channel], topology):
                        cluster_round(cluster_ids, channel, slot, half)
                for nd in nodes:
                    if not nd.complete and len(nd.tables.knowledge()) == n - 1:
                        nd.complete = True
                        nd.completion_slot = slot
                        nd.ttr = 2 * slot - (1 if half == 1 else 0)
                if all(nd.complete for nd in nodes):
                    done = True
                    break
            if done:
                break

    ttrs = []
    censored = []
    for nd in nodes:
        if nd.complete:
            ttrs.append(nd.ttr)
            censored.append(False)
        else:
            ttrs.append(2 * scenario.max_slots)
            censored.append(True)

    assert packets >= HANDSHAKE_SIZES[scenario.handshake] * rendezvous
    return RunRecord(
        node_count=n,
        handshake=scenario.handshake,
        max_slots=scenario.max_slots,
        ttr_half_slots=tuple(ttrs),
        censored=tuple(censored),
        packets=packets,
        rendezvous=rendezvous,
        trace=tuple(rows) if rows is not None else None,
    )
