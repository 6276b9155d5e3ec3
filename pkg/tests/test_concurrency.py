from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from xmathml import build_parallel, serialize_mathml
from treegen import make_corpus


def test_parallel_conversions_are_independent():
    docs = make_corpus(64, seed=7)

    def convert(doc):
        return serialize_mathml(build_parallel(doc, tex="t"))

    serial = [convert(doc) for doc in docs]
    with ThreadPoolExecutor(max_workers=8) as pool:
        threaded = list(pool.map(convert, docs))
    assert threaded == serial
