"""Independent brute-force oracles the tests check the library against.

Deliberately written with plain loops and no shared code with the package:
these must stay an independent path.
"""

from __future__ import annotations

import math


def oracle_tokens(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        for word in line.split():
            w = word.lower()
            while w and w[0] in '.,;:!?()"':
                w = w[1:]
            while w and w[-1] in '.,;:!?()"':
                w = w[:-1]
            w = "".join(ch for ch in w if ch not in "{}")
            if w:
                out.append(w)
    return out


def oracle_bleu(candidate: str, reference: str) -> float:
    cand = oracle_tokens(candidate)
    ref = oracle_tokens(reference)
    if cand == ref:
        return 1.0
    log_sum = 0.0
    for n in (1, 2, 3, 4):
        matched = 0
        total = max(len(cand) - n + 1, 0)
        cand_counts: dict[tuple, int] = {}
        for i in range(len(cand) - n + 1):
            gram = tuple(cand[i : i + n])
            cand_counts[gram] = cand_counts.get(gram, 0) + 1
        ref_counts: dict[tuple, int] = {}
        for i in range(len(ref) - n + 1):
            gram = tuple(ref[i : i + n])
            ref_counts[gram] = ref_counts.get(gram, 0) + 1
        for gram, count in cand_counts.items():
            matched += min(count, ref_counts.get(gram, 0))
        precision = matched / total if total else 0.0
        if precision == 0.0:
            if n == 1:
                return 0.0
            precision = 1.0 / (2 * len(cand))
        log_sum += math.log(precision)
    score = math.exp(log_sum / 4)
    if len(cand) < len(ref):
        score *= math.exp(1 - len(ref) / len(cand))
    return score


def oracle_cosine(a: str, b: str) -> float:
    ta, tb = oracle_tokens(a), oracle_tokens(b)
    vocab = sorted(set(ta) | set(tb))
    va = [sum(1 for t in ta if t == w) for w in vocab]
    vb = [sum(1 for t in tb if t == w) for w in vocab]
    if va == vb:
        return 1.0
    dot = sum(x * y for x, y in zip(va, vb))
    na = math.sqrt(sum(x * x for x in va))
    nb = math.sqrt(sum(y * y for y in vb))
    return dot / (na * nb)


def oracle_f_measure(p: float, r: float) -> float:
    if p + r == 0:
        return 0.0
    return 2 / (1 / p + 1 / r) if p > 0 and r > 0 else 0.0


def oracle_longest_path_ranks(root: str, edges: list[tuple[str, str]]) -> dict[str, int]:
    """Recursive longest-path depth from the root over a DAG."""
    children: dict[str, list[str]] = {}
    for s, t in edges:
        children.setdefault(s, []).append(t)

    ranks: dict[str, int] = {}

    def walk(node: str, depth: int):
        if depth > ranks.get(node, -1):
            ranks[node] = depth
            for child in children.get(node, ()):
                walk(child, depth + 1)

    walk(root, 0)
    return ranks
