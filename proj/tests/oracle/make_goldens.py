"""Independent oracle for the similarity and selector golden files.

Skeleton trees and link sets are written out by hand from the query text;
edit distances come from the `zss` package (pip install zss), so nothing here
shares code with the C++ implementation. Run from the repository root:

    python3 tests/oracle/make_goldens.py
"""
import json
import math
from itertools import combinations

import zss


def T(label, *children):
    node = zss.Node(label)
    for c in children:
        node.addkid(c)
    return node


def ted(a, b):
    return int(zss.simple_distance(a, b))


def cos01(u, v):
    dot = sum(x * y for x, y in zip(u, v))
    return (dot / math.sqrt(sum(x * x for x in u) * sum(y * y for y in v)) + 1) / 2


def jaccard(a, b):
    return 1.0 if not a and not b else len(a & b) / len(a | b)


def simple(*select_items, where=None):
    kids = [T("SELECT-LIST", *select_items), T("FROM", T("TAB"))]
    if where is not None:
        kids.append(T("WHERE", where))
    return T("SELECT-STMT", *kids)


def labels(trees, links, vecs, pairs, d_max):
    out = []
    for i, j in pairs:
        q = cos01(vecs[i], vecs[j])
        s = 1 - ted(trees[i], trees[j]) / d_max if d_max else 1.0
        l = jaccard(links[i], links[j])
        out.append({"a": i, "b": j, "question_sim": q, "skeleton_sim": s, "link_sim": l,
                    "mean": (q + s + l) / 3})
    return out


def three_questions():
    # q0 SELECT name FROM singer
    # q1 SELECT name FROM singer WHERE age > 20
    # q2 SELECT COUNT(*) FROM singer
    trees = [simple(T("COL")),
             simple(T("COL"), where=T(">", T("COL"), T("VAL"))),
             simple(T("COUNT", T("STAR")))]
    links = [{"singer", "singer.name"}, {"singer", "singer.name", "singer.age"}, {"singer"}]
    vecs = [[1, 0], [0, 1], [1, 1]]
    pairs = list(combinations(range(3), 2))
    d_max = max(ted(trees[i], trees[j]) for i, j in pairs)
    return {"d_max": d_max, "distances": {f"{i}-{j}": ted(trees[i], trees[j]) for i, j in pairs},
            "pairs": labels(trees, links, vecs, pairs, d_max)}


def selector_pool():
    # target: SELECT name FROM singer WHERE country = 'France'
    target = simple(T("COL"), where=T("=", T("COL"), T("VAL")))
    target_links = {"singer", "singer.name", "singer.country"}
    target_vec = [1, 1, 0]
    # pool ids 10..14, see selector_pool.json
    trees = [
        simple(T("COL")),                                                   # 10 SELECT name FROM singer
        simple(T("COL"), where=T(">", T("COL"), T("VAL"))),                 # 11 SELECT name FROM singer WHERE age > 30
        simple(T("COUNT", T("STAR")), where=T("=", T("COL"), T("VAL"))),    # 12 SELECT count(*) FROM singer WHERE country = 'USA'
        simple(T("COL"), T("COL")),                                         # 13 SELECT name, capacity FROM stadium
        T("SELECT-STMT", T("SELECT-LIST", T("COL")), T("FROM", T("TAB")),   # 14 SELECT name FROM singer ORDER BY age DESC LIMIT 1
          T("ORDER-BY", T("DESC", T("COL"))), T("LIMIT", T("VAL"))),
    ]
    links = [
        {"singer", "singer.name"},
        {"singer", "singer.name", "singer.age"},
        {"singer", "singer.country"},
        {"stadium", "stadium.name", "stadium.capacity"},
        {"singer", "singer.name", "singer.age"},
    ]
    vecs = [[1, 0, 0], [0, 1, 0], [1, 1, 1], [0, 0, 1], [1, 0, 1]]
    ids = [10, 11, 12, 13, 14]
    d_max = max([ted(target, t) for t in trees] +
                [ted(trees[i], trees[j]) for i, j in combinations(range(5), 2)])
    rows = []
    for i, cid in enumerate(ids):
        q = cos01(target_vec, vecs[i])
        s = 1 - ted(target, trees[i]) / d_max
        l = jaccard(target_links, links[i])
        rows.append({"id": cid, "question_sim": q, "skeleton_sim": s, "link_sim": l, "mean": (q + s + l) / 3})
    rows.sort(key=lambda r: (-r["mean"], r["id"]))
    return {"d_max": d_max, "ranking": rows}


if __name__ == "__main__":
    with open("tests/data/three_questions_labels.json", "w") as f:
        json.dump(three_questions(), f, indent=1)
        f.write("\n")
    with open("tests/data/selector_expected.json", "w") as f:
        json.dump(selector_pool(), f, indent=1)
        f.write("\n")
