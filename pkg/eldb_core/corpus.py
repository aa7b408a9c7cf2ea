"""Named graphs used by the sweeps and the tests."""
from typing import Callable, Dict, List

import networkx as nx

from eldb_core.exceptions import InvalidParameterError
from eldb_core.graph_core import build_tk, from_networkx, generate, product, subdivided_star
from eldb_core.models import Graph


def _family(family: str, size: int) -> Callable[[], Graph]:
    return lambda: generate(family, size)


CORPUS: Dict[str, Dict] = {
    "K2": {"name": "K_2", "description": "single edge", "build": _family("complete", 2)},
    "P3": {"name": "P_3", "description": "path on 3 vertices", "build": _family("path", 3)},
    "P4": {"name": "P_4", "description": "path on 4 vertices", "build": _family("path", 4)},
    "P5": {"name": "P_5", "description": "path on 5 vertices", "build": _family("path", 5)},
    "P6": {"name": "P_6", "description": "path on 6 vertices", "build": _family("path", 6)},
    "P9": {"name": "P_9", "description": "path on 9 vertices", "build": _family("path", 9)},
    "C3": {"name": "C_3", "description": "triangle", "build": _family("cycle", 3)},
    "C4": {"name": "C_4", "description": "square", "build": _family("cycle", 4)},
    "C5": {"name": "C_5", "description": "pentagon", "build": _family("cycle", 5)},
    "C6": {"name": "C_6", "description": "hexagon", "build": _family("cycle", 6)},
    "C7": {"name": "C_7", "description": "the only cycle needing cost 3", "build": _family("cycle", 7)},
    "C8": {"name": "C_8", "description": "octagon", "build": _family("cycle", 8)},
    "C10": {"name": "C_10", "description": "decagon", "build": _family("cycle", 10)},
    "K4": {"name": "K_4", "description": "complete graph on 4 vertices", "build": _family("complete", 4)},
    "K13": {"name": "K_{1,3}", "description": "claw", "build": _family("star", 4)},
    "S1_K13": {
        "name": "S_1(K_{1,3})",
        "description": "claw with every edge subdivided once",
        "build": lambda: subdivided_star(1, 4),
    },
    "S2_K14": {
        "name": "S_2(K_{1,4})",
        "description": "four legs of length 3",
        "build": lambda: subdivided_star(2, 5),
    },
    "T2": {"name": "T_2", "description": "double star on 6 vertices", "build": lambda: build_tk(2)},
    "T3": {"name": "T_3", "description": "bicentral tree on 10 vertices", "build": lambda: build_tk(3)},
    "bull": {"name": "bull", "description": "triangle with two pendant vertices", "build": lambda: from_networkx(nx.bull_graph())},
    "house": {"name": "house", "description": "square with a roof", "build": lambda: from_networkx(nx.house_graph())},
    "cube": {"name": "Q_3", "description": "3-dimensional cube", "build": lambda: from_networkx(nx.cubical_graph())},
    "petersen": {"name": "Petersen", "description": "Petersen graph", "build": lambda: from_networkx(nx.petersen_graph())},
    "K2_lex_P3": {
        "name": "K_2 . P_3",
        "description": "lexicographic product of an edge and P_3",
        "build": lambda: product("lexicographic", generate("complete", 2), generate("path", 3)),
    },
    "P2_strong_P3": {
        "name": "P_2 x P_3 (strong)",
        "description": "strong product of an edge and P_3",
        "build": lambda: product("strong", generate("path", 2), generate("path", 3)),
    },
}


def get_corpus_graph(key: str) -> Graph:
    """Build a corpus graph by key."""
    if key not in CORPUS:
        raise InvalidParameterError(f"unknown corpus graph {key!r}")
    return CORPUS[key]["build"]()


def get_all_corpus_keys() -> List[str]:
    """All corpus keys."""
    return list(CORPUS.keys())


def small_corpus_keys(max_vertices: int = 8) -> List[str]:
    """Keys of corpus graphs with at most `max_vertices` vertices."""
    return [key for key in CORPUS if get_corpus_graph(key).vertex_count <= max_vertices]


def resolve_graph(spec: str) -> Graph:
    """
    Graph from a corpus key or a "family:size" string.

    Besides the basic families, "tk:K" builds T_K and "sstar:I:N" the I-th
    subdivision of K_{1,N-1}.
    """
    if spec in CORPUS:
        return get_corpus_graph(spec)
    parts = spec.split(":")
    try:
        numbers = [int(p) for p in parts[1:]]
    except ValueError:
        raise InvalidParameterError(f"cannot read graph spec {spec!r}")
    if parts[0] == "tk" and len(numbers) == 1:
        return build_tk(numbers[0])
    if parts[0] == "sstar" and len(numbers) == 2:
        return subdivided_star(numbers[0], numbers[1])
    if len(numbers) == 1:
        return generate(parts[0], numbers[0])
    raise InvalidParameterError(f"cannot read graph spec {spec!r}")
