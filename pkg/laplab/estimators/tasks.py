"""
Decomposition of a model into independent estimation blocks.

Every block fits an auxiliary model on a domain A and reports the parameters of its target cliques. Marginal blocks
parametrize the marginal over A by the downward closure of its clique system; conditional blocks parametrize
p(x_j | x_{A \\ {j}}) by the cliques that can carry a potential containing j.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from laplab.exceptions import EstimationError
from laplab.graph import (
    Clique,
    CliqueSystem,
    clique_closure,
    conditional_support,
    marginal_clique_system,
    neighbors,
    one_neighbourhood,
    one_node_neighbourhood,
    preserves_potential,
    strong_lap_satisfied,
)
from laplab.model import ModelStructure
from laplab.potentials import ParamLayout

logger = logging.getLogger(__name__)


class ObjectiveKind(str, Enum):
    MARGINAL = "marginal"
    CONDITIONAL = "conditional"
    FULL = "full"


class Neighbourhood(str, Enum):
    FULL = "full"
    ONE_NODE = "one-node"


@dataclass(frozen=True)
class EstimatorTask:
    block_id: int
    anchor: Clique
    target_cliques: Tuple[Clique, ...]
    domain: Tuple[int, ...]
    kind: ObjectiveKind
    auxiliary: CliqueSystem
    cards: Tuple[int, ...]
    node: Optional[int] = None
    certified: bool = True

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(sorted(self.domain)))
        errors = self.check()
        if errors:
            raise EstimationError(f"Invalid task {self.block_id}: " + "; ".join(errors))

    def check(self) -> List[str]:
        errors = []
        members = frozenset(self.domain)
        if not members:
            errors.append("the domain must not be empty")
        if not self.target_cliques and self.kind != ObjectiveKind.FULL:
            errors.append("a task needs at least one target clique")
        for clique in self.target_cliques:
            if not members.issuperset(clique):
                errors.append(f"target {clique} is not inside the domain")
            if clique not in self.auxiliary:
                errors.append(f"target {clique} is not part of the auxiliary structure")
        if not members.issuperset(self.auxiliary.nodes):
            errors.append("the auxiliary structure reaches outside the domain")
        errors.extend(self._check_node())
        return errors

    def _check_node(self) -> List[str]:
        if self.kind != ObjectiveKind.CONDITIONAL:
            return [] if self.node is None else ["only conditional tasks condition on a node"]
        if self.node not in self.domain:
            return [f"conditioned node {self.node} is not part of the domain"]
        return [
            f"clique {clique} does not contain the conditioned node {self.node}"
            for clique in self.target_cliques + self.auxiliary.cliques
            if self.node not in clique
        ]

    @cached_property
    def layout(self) -> ParamLayout:
        return ParamLayout(self.auxiliary.cliques, self.cards)

    @property
    def num_states(self) -> int:
        total = 1
        for node in self.domain:
            total *= self.cards[node]
        return total


def _marginal_task(
    structure: ModelStructure, block_id: int, q: Clique, domain, with_induced_edges: bool, fallback: bool
) -> EstimatorTask:
    auxiliary = clique_closure(marginal_clique_system(structure.graph, structure.cliques, domain, with_induced_edges))
    targets = tuple(
        clique
        for clique in structure.cliques
        if set(clique) <= set(q) and preserves_potential(structure.graph, domain, clique)
    )
    if fallback and q not in targets:
        targets += (q,)

    satisfied = strong_lap_satisfied(structure.graph, domain, q)
    if not satisfied:
        logger.warning("domain %s fails the Strong LAP condition for %s", sorted(domain), q)
    return EstimatorTask(
        block_id=block_id,
        anchor=q,
        target_cliques=targets,
        domain=tuple(domain),
        kind=ObjectiveKind.MARGINAL,
        auxiliary=auxiliary,
        cards=structure.cards,
        certified=satisfied and with_induced_edges,
    )


def _conditional_task(
    structure: ModelStructure, block_id: int, q: Clique, domain, j: int, fallback: bool = False
) -> EstimatorTask:
    auxiliary = conditional_support(structure.graph, structure.cliques, domain, j)
    targets = tuple(
        clique
        for clique in structure.cliques
        if j in clique and set(clique) <= domain and preserves_potential(structure.graph, domain, clique)
    )
    if fallback and q not in targets:
        targets += (q,)

    satisfied = strong_lap_satisfied(structure.graph, domain, q)
    if not satisfied:
        logger.warning("domain %s fails the Strong LAP condition for %s", sorted(domain), q)
    return EstimatorTask(
        block_id=block_id,
        anchor=q,
        target_cliques=targets,
        domain=tuple(domain),
        kind=ObjectiveKind.CONDITIONAL,
        auxiliary=auxiliary,
        cards=structure.cards,
        node=j,
        certified=satisfied,
    )


def _domain_for(structure: ModelStructure, q: Clique, neighbourhood: Neighbourhood):
    if neighbourhood == Neighbourhood.FULL:
        return one_neighbourhood(structure.cliques, q)
    return one_node_neighbourhood(structure.graph, q, q[0])


def _uncovered(structure: ModelStructure, tasks: Sequence[EstimatorTask]) -> List[Clique]:
    covered = {clique for task in tasks for clique in task.target_cliques}
    return [clique for clique in structure.cliques if clique not in covered]


def build_lap_tasks(
    structure: ModelStructure, neighbourhood: Neighbourhood = Neighbourhood.FULL, with_induced_edges: bool = True
) -> List[EstimatorTask]:
    """
    One marginal task per maximal clique q of the model, over the 1-neighbourhood of q or over q plus the neighbours
    of its lowest node. Model cliques that no such block preserves get a block of their own.
    """

    tasks: List[EstimatorTask] = []
    for q in structure.cliques.maximal():
        domain = _domain_for(structure, q, neighbourhood)
        tasks.append(_marginal_task(structure, len(tasks), q, domain, with_induced_edges, fallback=False))

    for q in _uncovered(structure, tasks):
        domain = _domain_for(structure, q, neighbourhood)
        tasks.append(_marginal_task(structure, len(tasks), q, domain, with_induced_edges, fallback=True))

    logger.debug("built %d LAP tasks (%s neighbourhood)", len(tasks), neighbourhood.value)
    return tasks


def build_clap_tasks(
    structure: ModelStructure, neighbourhood: Neighbourhood = Neighbourhood.ONE_NODE
) -> List[EstimatorTask]:
    """
    One conditional task per maximal clique q, conditioning on j = min(q).
    """

    tasks: List[EstimatorTask] = []
    for q in structure.cliques.maximal():
        domain = _domain_for(structure, q, neighbourhood)
        tasks.append(_conditional_task(structure, len(tasks), q, domain, q[0]))

    for q in _uncovered(structure, tasks):
        domain = _domain_for(structure, q, neighbourhood)
        tasks.append(_conditional_task(structure, len(tasks), q, domain, q[0], fallback=True))

    logger.debug("built %d CLAP tasks (%s neighbourhood)", len(tasks), neighbourhood.value)
    return tasks


def build_pl_tasks(structure: ModelStructure) -> List[EstimatorTask]:
    """
    One conditional task per node m that appears in some clique, over {m} and its neighbours.
    """

    tasks: List[EstimatorTask] = []
    for m in structure.graph.nodes:
        if not any(m in clique for clique in structure.cliques):
            continue
        domain = frozenset({m}) | neighbors(structure.graph, m)
        tasks.append(_conditional_task(structure, len(tasks), (m,), domain, m, fallback=False))
    return tasks


def build_ml_task(structure: ModelStructure) -> EstimatorTask:
    return EstimatorTask(
        block_id=0,
        anchor=tuple(structure.graph.nodes),
        target_cliques=structure.cliques.cliques,
        domain=tuple(structure.graph.nodes),
        kind=ObjectiveKind.FULL,
        auxiliary=structure.cliques,
        cards=structure.cards,
    )


def authoritative_blocks(tasks: Sequence[EstimatorTask]) -> Dict[Clique, int]:
    """
    For every targeted clique, the block that supplies its parameters in LAP assembly: the block anchored at the clique
    when there is one, otherwise the lowest block id targeting it.
    """

    authority: Dict[Clique, int] = {}
    for task in sorted(tasks, key=lambda task: task.block_id):
        for clique in task.target_cliques:
            authority.setdefault(clique, task.block_id)
    for task in sorted(tasks, key=lambda task: task.block_id, reverse=True):
        if task.anchor in task.target_cliques:
            authority[task.anchor] = task.block_id
    return authority
