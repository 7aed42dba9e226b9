"""Event-node HMMs quantifying per-user privacy risk over post sequences.

A node is a processed post text; matching against existing nodes uses cosine
similarity over L2-normalised tf-idf vectors. The model keeps integer counts:
transitions between consecutive nodes of one user's sequence, observations of
a user at a node, and sequence-start occurrences per node.

The privacy probability of a user's sequence is the product of a linkability
prior from a PII-only model and one factor per step,

    factor = [w_T * p(node | prev)] * [1 - w_O * p(user | node)],

with w_T = 1/count(node | prev) and w_O = 1/count(user | node); the first
step uses sequence-start counts in place of transition counts. A user never
observed at a node contributes an observation part of 1. Risk is one minus
the privacy probability.

Scoring policy for events absent from the trained model: a test post matching
no node, or a transition never observed, contributes a step factor of 0
(fully unique, hence fully identifying), and the unmatched post acts as the
predecessor of the next step.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Mapping, Sequence

from ..errors import InsufficientDataError

logger = logging.getLogger(__name__)

#: Predecessor sentinel for the first step of a sequence.
START = None

#: Predecessor sentinel after a post that matched no node.
UNSEEN = -1

DEFAULT_TAU_SIM = 0.8
DEFAULT_MAX_PATH_LEN = 6
DEFAULT_MAX_PATHS = 100_000


@dataclass
class PreparedPost:
    """A post reduced to what sequence modelling needs."""

    user_id: str
    timestamp: datetime
    text: str
    vector: dict[int, float]
    cluster: int = 0
    has_pii: bool = False
    topic: object = None
    phase: str | None = None
    post_id: str = ""


@dataclass
class EventNode:
    node_id: int
    text: str
    vector: dict[int, float]
    observations: dict[str, int] = field(default_factory=dict)
    total_observations: int = 0
    transitions: dict[int, int] = field(default_factory=dict)

    @property
    def total_out(self) -> int:
        return sum(self.transitions.values())


class PrivacyHmm:
    """Immutable-after-build event-node model; scoring calls are pure."""

    def __init__(self, tau_sim: float = DEFAULT_TAU_SIM, partition: object = None):
        if not 0.0 <= tau_sim <= 1.0:
            raise ValueError(f"tau_sim must be in [0, 1], got {tau_sim}")
        self.tau_sim = tau_sim
        self.partition = partition
        self.nodes: dict[int, EventNode] = {}
        self.initial_counts: dict[int, int] = {}
        self.total_initial = 0
        self._text_index: dict[str, int] = {}
        self._postings: dict[int, list[tuple[int, float]]] = {}
        self._paths_cache: dict[tuple[int, int], "_PathTable"] = {}

    # -- construction ------------------------------------------------------

    def _new_node(self, text: str, vector: Mapping[int, float]) -> int:
        node_id = len(self.nodes)
        self.nodes[node_id] = EventNode(node_id=node_id, text=text, vector=dict(vector))
        self._text_index[text] = node_id
        for term, weight in vector.items():
            self._postings.setdefault(term, []).append((node_id, weight))
        return node_id

    def _match_or_create(self, text: str, vector: Mapping[int, float]) -> int:
        matched = match_node(self, vector)
        if matched is None:
            matched = self._text_index.get(text)
        if matched is None:
            matched = self._new_node(text, vector)
        return matched

    def add_sequence(self, user_id: str, posts: Sequence[PreparedPost]) -> None:
        """Feed one user's chronologically ordered posts into the counts."""
        self._paths_cache.clear()
        previous = START
        for post in posts:
            node_id = self._match_or_create(post.text, post.vector)
            node = self.nodes[node_id]
            node.observations[user_id] = node.observations.get(user_id, 0) + 1
            node.total_observations += 1
            if previous is START:
                self.initial_counts[node_id] = self.initial_counts.get(node_id, 0) + 1
                self.total_initial += 1
            else:
                prev_node = self.nodes[previous]
                prev_node.transitions[node_id] = prev_node.transitions.get(node_id, 0) + 1
            previous = node_id

    # -- probabilities -----------------------------------------------------

    def p_initial(self, node_id: int) -> float:
        count = self.initial_counts.get(node_id, 0)
        return count / self.total_initial if self.total_initial else 0.0

    def p_transition(self, prev_id: int, node_id: int) -> float:
        prev = self.nodes[prev_id]
        total = prev.total_out
        return prev.transitions.get(node_id, 0) / total if total else 0.0

    def p_observation(self, user_id: str, node_id: int) -> float:
        node = self.nodes[node_id]
        count = node.observations.get(user_id, 0)
        return count / node.total_observations if node.total_observations else 0.0

    # -- persistence -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "version": 1,
            "kind": "privacy_hmm",
            "tau_sim": self.tau_sim,
            "partition": self.partition,
            "total_initial": self.total_initial,
            "initial_counts": {str(k): v for k, v in sorted(self.initial_counts.items())},
            "nodes": [
                {
                    "id": node.node_id,
                    "text": node.text,
                    "vector": {str(t): w for t, w in sorted(node.vector.items())},
                    "observations": dict(sorted(node.observations.items())),
                    "transitions": {str(k): v for k, v in sorted(node.transitions.items())},
                }
                for _, node in sorted(self.nodes.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "PrivacyHmm":
        if obj.get("kind") != "privacy_hmm" or obj.get("version") != 1:
            raise ValueError("not a version-1 privacy_hmm model dump")
        hmm = cls(tau_sim=float(obj["tau_sim"]), partition=obj.get("partition"))
        for spec in obj["nodes"]:
            node = EventNode(
                node_id=int(spec["id"]),
                text=spec["text"],
                vector={int(t): float(w) for t, w in spec["vector"].items()},
                observations={u: int(c) for u, c in spec["observations"].items()},
                transitions={int(k): int(v) for k, v in spec["transitions"].items()},
            )
            node.total_observations = sum(node.observations.values())
            hmm.nodes[node.node_id] = node
            hmm._text_index[node.text] = node.node_id
            for term, weight in node.vector.items():
                hmm._postings.setdefault(term, []).append((node.node_id, weight))
        hmm.initial_counts = {int(k): int(v) for k, v in obj["initial_counts"].items()}
        hmm.total_initial = int(obj["total_initial"])
        return hmm


def match_node(hmm: PrivacyHmm, vector: Mapping[int, float],
               tau_sim: float | None = None) -> int | None:
    """Most-similar node by cosine, or None below the threshold.

    Expects an L2-normalised vector; ties break to the lowest node id.
    """
    tau = hmm.tau_sim if tau_sim is None else tau_sim
    scores: dict[int, float] = {}
    for term, weight in vector.items():
        for node_id, node_weight in hmm._postings.get(term, ()):
            scores[node_id] = scores.get(node_id, 0.0) + weight * node_weight
    best_id, best_score = None, 0.0
    for node_id in sorted(scores):
        if scores[node_id] > best_score:
            best_id, best_score = node_id, scores[node_id]
    if best_id is not None and best_score >= tau:
        return best_id
    if tau == 0.0 and hmm.nodes:
        return min(hmm.nodes)  # zero-overlap vectors tie at similarity 0
    return None


@dataclass(frozen=True)
class StepRecord:
    """Every intermediate quantity behind one step factor."""

    index: int
    node_id: int | None
    w_t: float | None
    p_transition: float
    w_o: float | None
    p_observation: float
    factor: float

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "node_id": self.node_id,
            "w_t": self.w_t,
            "p_transition": self.p_transition,
            "w_o": self.w_o,
            "p_observation": self.p_observation,
            "factor": self.factor,
        }


def _step_record(hmm: PrivacyHmm, user_id: str, prev: int | None,
                 node_id: int, index: int = 0) -> StepRecord:
    if node_id not in hmm.nodes:
        raise KeyError(f"node {node_id} not in model")
    if prev is START:
        count = hmm.initial_counts.get(node_id, 0)
        p_trans = hmm.p_initial(node_id)
    elif prev == UNSEEN or node_id not in hmm.nodes[prev].transitions:
        count = 0
        p_trans = 0.0
    else:
        count = hmm.nodes[prev].transitions[node_id]
        p_trans = hmm.p_transition(prev, node_id)
    w_t = (1.0 / count) if count else None
    trans_part = (w_t * p_trans) if count else 0.0

    node = hmm.nodes[node_id]
    obs_count = node.observations.get(user_id, 0)
    p_obs = hmm.p_observation(user_id, node_id)
    w_o = (1.0 / obs_count) if obs_count else None
    obs_part = (1.0 - w_o * p_obs) if obs_count else 1.0

    return StepRecord(
        index=index,
        node_id=node_id,
        w_t=w_t,
        p_transition=p_trans,
        w_o=w_o,
        p_observation=p_obs,
        factor=trans_part * obs_part,
    )


def step_factor(hmm: PrivacyHmm, user_id: str, prev: int | None, node_id: int) -> float:
    """The [0, 1] contribution of one step; ``prev`` is START for the first."""
    return _step_record(hmm, user_id, prev, node_id).factor


@dataclass
class _PathTable:
    paths: list[tuple[tuple[int, ...], float]]
    by_node: dict[int, list[int]]
    truncated: bool


def _enumerate_paths(hmm: PrivacyHmm, max_len: int, max_paths: int) -> _PathTable:
    """All simple paths from start nodes along observed transitions.

    Each path carries its user-independent transition product
    (w_T p(X_1) * prod w_T p(X | prev)). Stops at the length and count caps.
    """
    key = (max_len, max_paths)
    cached = hmm._paths_cache.get(key)
    if cached is not None:
        return cached
    paths: list[tuple[tuple[int, ...], float]] = []
    truncated = False

    def extend(path: list[int], product: float) -> bool:
        nonlocal truncated
        if len(paths) >= max_paths:
            truncated = True
            return False
        paths.append((tuple(path), product))
        node = hmm.nodes[path[-1]]
        successors = [s for s in sorted(node.transitions) if s not in path]
        if len(path) >= max_len:
            if successors:
                truncated = True
            return True
        total_out = node.total_out
        for succ in successors:
            count = node.transitions[succ]
            step = (1.0 / count) * (count / total_out)
            if not extend(path + [succ], product * step):
                return False
        return True

    for start in sorted(hmm.initial_counts):
        count = hmm.initial_counts[start]
        first = (1.0 / count) * (count / hmm.total_initial)
        if not extend([start], first):
            break

    by_node: dict[int, list[int]] = {}
    for i, (nodes, _) in enumerate(paths):
        for node_id in nodes:
            by_node.setdefault(node_id, []).append(i)
    table = _PathTable(paths=paths, by_node=by_node, truncated=truncated)
    hmm._paths_cache[key] = table
    return table


@dataclass(frozen=True)
class LinkabilityResult:
    value: float
    truncated: bool
    n_paths: int


def linkability_prior(
    pii_hmm: PrivacyHmm,
    user_id: str,
    max_len: int = DEFAULT_MAX_PATH_LEN,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> LinkabilityResult:
    """Minimum path product over PII-model paths touching the user.

    Considers every simple path that includes at least one node where the
    user has an observation probability above zero; a user absent from all
    PII nodes gets 1. Path enumeration is capped; truncation is reported.
    """
    user_nodes = [
        node_id
        for node_id, node in pii_hmm.nodes.items()
        if node.observations.get(user_id, 0) > 0
    ]
    if not user_nodes:
        return LinkabilityResult(value=1.0, truncated=False, n_paths=0)
    table = _enumerate_paths(pii_hmm, max_len, max_paths)
    candidate_ids = sorted({i for n in user_nodes for i in table.by_node.get(n, ())})
    best = 1.0
    for i in candidate_ids:
        nodes, product = table.paths[i]
        for node_id in nodes:
            node = pii_hmm.nodes[node_id]
            obs_count = node.observations.get(user_id, 0)
            if obs_count:
                product *= 1.0 - (1.0 / obs_count) * (obs_count / node.total_observations)
        best = min(best, product)
    return LinkabilityResult(value=best, truncated=table.truncated,
                             n_paths=len(candidate_ids))


@dataclass
class RiskTrace:
    """Full account of one user's sequence score."""

    user_id: str
    steps: list[StepRecord]
    linkability: LinkabilityResult
    privacy_probability: float
    risk: float

    def to_dict(self) -> dict:
        return {
            "user_id": self.user_id,
            "steps": [step.to_dict() for step in self.steps],
            "linkability_prior": self.linkability.value,
            "linkability_truncated": self.linkability.truncated,
            "linkability_paths": self.linkability.n_paths,
            "privacy_probability": self.privacy_probability,
            "risk": self.risk,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def risk_after(self, n: int) -> float:
        """Risk of the length-n prefix of the scored sequence."""
        if n <= 0:
            return 0.0
        probability = self.linkability.value
        for step in self.steps[:n]:
            probability *= step.factor
        return 1.0 - probability


def sequence_privacy(
    hmm: PrivacyHmm,
    pii_hmm: PrivacyHmm,
    user_id: str,
    posts: Sequence[PreparedPost],
    max_len: int = DEFAULT_MAX_PATH_LEN,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> RiskTrace:
    """Score a chronologically ordered test sequence for one user.

    privacy probability = linkability prior * product of step factors;
    risk = 1 - privacy probability. An empty sequence has probability 1 by
    definition (the prior is not applied).
    """
    if not posts:
        return RiskTrace(
            user_id=user_id,
            steps=[],
            linkability=LinkabilityResult(value=1.0, truncated=False, n_paths=0),
            privacy_probability=1.0,
            risk=0.0,
        )
    prior = linkability_prior(pii_hmm, user_id, max_len=max_len, max_paths=max_paths)
    steps: list[StepRecord] = []
    probability = prior.value
    prev: int | None = START
    for index, post in enumerate(posts):
        node_id = match_node(hmm, post.vector)
        if node_id is None:
            node_id = hmm._text_index.get(post.text)
        if node_id is None:
            # Brand-new post: observed once by this user only, so the
            # observation part is zero and the step factor is 0.
            record = StepRecord(
                index=index, node_id=None, w_t=None, p_transition=0.0,
                w_o=1.0, p_observation=1.0, factor=0.0,
            )
            prev = UNSEEN
        else:
            record = _step_record(hmm, user_id, prev, node_id, index=index)
            prev = node_id
        steps.append(record)
        probability *= record.factor
    return RiskTrace(
        user_id=user_id,
        steps=steps,
        linkability=prior,
        privacy_probability=probability,
        risk=1.0 - probability,
    )


@dataclass
class HmmSet:
    """Per-cluster models, their merge, and the PII-only model."""

    cluster_models: dict[int, PrivacyHmm]
    merged: PrivacyHmm
    pii: PrivacyHmm


def _chronological(posts: Iterable[PreparedPost]) -> list[PreparedPost]:
    indexed = list(enumerate(posts))
    indexed.sort(key=lambda pair: (pair[1].timestamp, pair[0]))
    return [post for _, post in indexed]


def _build_single(posts: Sequence[PreparedPost], tau_sim: float,
                  partition: object) -> PrivacyHmm:
    hmm = PrivacyHmm(tau_sim=tau_sim, partition=partition)
    by_user: dict[str, list[PreparedPost]] = {}
    for post in posts:
        by_user.setdefault(post.user_id, []).append(post)
    for user_id in sorted(by_user):
        hmm.add_sequence(user_id, _chronological(by_user[user_id]))
    return hmm


def merge_hmms(models: Iterable[PrivacyHmm], tau_sim: float) -> PrivacyHmm:
    """Union of node sets with count summation, keyed by representative text.

    Node ids in the merged model follow sorted text order, which makes the
    result independent of cluster evaluation order.
    """
    models = sorted(models, key=lambda m: str(m.partition))
    texts = sorted({node.text for m in models for node in m.nodes.values()})
    merged = PrivacyHmm(tau_sim=tau_sim, partition="merged")
    text_to_id = {}
    for text in texts:
        for model in models:
            source = model._text_index.get(text)
            if source is not None:
                text_to_id[text] = merged._new_node(text, model.nodes[source].vector)
                break
    for model in models:
        local_to_merged = {
            node_id: text_to_id[node.text] for node_id, node in model.nodes.items()
        }
        for node_id, node in model.nodes.items():
            target = merged.nodes[local_to_merged[node_id]]
            for user, count in node.observations.items():
                target.observations[user] = target.observations.get(user, 0) + count
            target.total_observations += node.total_observations
            for succ, count in node.transitions.items():
                succ_id = local_to_merged[succ]
                target.transitions[succ_id] = target.transitions.get(succ_id, 0) + count
        for node_id, count in model.initial_counts.items():
            merged_id = local_to_merged[node_id]
            merged.initial_counts[merged_id] = (
                merged.initial_counts.get(merged_id, 0) + count
            )
        merged.total_initial += model.total_initial
    return merged


def build_hmm(
    train_posts: Sequence[PreparedPost],
    tau_sim: float = DEFAULT_TAU_SIM,
    threads: int = 1,
) -> HmmSet:
    """Train per-cluster models, merge them, and build the PII model.

    Posts carry their cluster assignment; a user's transitions are counted
    within each cluster's chronological subsequence. PII-bearing posts
    additionally feed the PII model, which spans all clusters. Clusters may
    train concurrently (``threads`` > 1); the merge sums counts and is
    independent of evaluation order, so the result is identical either way.
    """
    train_posts = list(train_posts)
    if not train_posts:
        raise InsufficientDataError("empty training set")
    by_cluster: dict[int, list[PreparedPost]] = {}
    for post in train_posts:
        by_cluster.setdefault(post.cluster, []).append(post)
    clusters = sorted(by_cluster)
    if threads > 1 and len(clusters) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            built = list(
                pool.map(
                    lambda c: _build_single(by_cluster[c], tau_sim, partition=c),
                    clusters,
                )
            )
        cluster_models = dict(zip(clusters, built))
    else:
        cluster_models = {
            cluster: _build_single(by_cluster[cluster], tau_sim, partition=cluster)
            for cluster in clusters
        }
    merged = merge_hmms(cluster_models.values(), tau_sim)
    pii_posts = [post for post in train_posts if post.has_pii]
    pii = _build_single(pii_posts, tau_sim, partition="pii")
    return HmmSet(cluster_models=cluster_models, merged=merged, pii=pii)
