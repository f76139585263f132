"""Deterministic synthetic corpora shaped like the published aggregates.

The real proceedings data is not redistributable.  These builders produce
corpora whose networks hit the published totals exactly, so the bookkeeping
can be checked end to end.
"""

from __future__ import annotations

from .corpus import AuthorRecord, Corpus, PaperEntry


def _corpus(papers: list[tuple[tuple[str, ...], tuple[str, ...]]], year: int = 2000) -> Corpus:
    names = sorted({a for authors, _ in papers for a in authors})
    directory = {n: AuthorRecord(n) for n in names}
    width = len(str(len(papers)))
    entries = tuple(
        PaperEntry(f"s{i:0{width}d}", year, f"Synthetic {i}", authors, jel)
        for i, (authors, jel) in enumerate(papers)
    )
    return Corpus(entries, directory)


def component_benchmark_corpus() -> Corpus:
    """Coauthorship corpus with 17 components: the published component table.

    Giant component: 850 authors, 1442 distinct pairs, 167 repeated pairings
    (1609 links with repetition), diameter 20.  Then one 5-author paper, five
    3-author papers and ten 2-author papers.
    """
    jel = ("C2", "I3")
    papers: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
    spine = [f"A{i:03d}" for i in range(21)]
    extras = [f"A{i:03d}" for i in range(21, 850)]
    pairs = [(spine[i], spine[i + 1]) for i in range(20)]
    # each extra hangs off a spine node at positions 2..18, keeping the diameter at 20
    anchor = {x: 2 + k % 17 for k, x in enumerate(extras)}
    pairs += [(spine[anchor[x]], x) for x in extras]
    # extra-extra links only between equal anchors, which cannot shorten the spine
    need = 1442 - len(pairs)
    pairs += [(extras[k], extras[k + 17]) for k in range(need)]
    assert len(pairs) == 1442
    papers += [(p, jel) for p in pairs]
    papers += [(p, jel) for p in pairs[:167]]

    papers.append((tuple(f"B{i}" for i in range(5)), jel))
    for t in range(5):
        papers.append((tuple(f"T{t}{i}" for i in range(3)), jel))
    for d in range(10):
        papers.append(((f"D{d:02d}a", f"D{d:02d}b"), jel))
    return _corpus(papers)


def jel_like_corpus() -> Corpus:
    """Corpus whose JEL network has 109 codes, 417 distinct non-loop links,
    34 self-loops, one component and diameter 6.

    A 7-code chain fixes the diameter; every other code attaches to the chain
    midpoint, and extra links among those codes never bypass the chain.
    """
    letters = "CDEFHIJLOQGRKNBAMPZ"
    codes = [f"{letter}{digit}" for digit in range(10) for letter in letters][:109]
    chain, rest = codes[:7], codes[7:]
    pairs = [(chain[i], chain[i + 1]) for i in range(6)]
    pairs += [(chain[3], c) for c in rest]
    extra = []
    n = len(rest)
    step = 1
    while len(pairs) + len(extra) < 417:
        for i in range(n):
            if len(pairs) + len(extra) == 417:
                break
            j = i + step
            if j < n:
                extra.append((rest[i], rest[j]))
        step += 1
    pairs += extra
    loops = codes[:34]
    papers = []
    for i, (a, b) in enumerate(pairs):
        papers.append(((f"X{i:03d}, A.", f"Y{i:03d}, B."), (a, b)))
    for i, c in enumerate(loops):
        papers.append(((f"L{i:03d}, C.", f"M{i:03d}, D."), (c,)))
    # repeat some pairings so multiplicities are exercised
    for i, (a, b) in enumerate(pairs[:40]):
        papers.append(((f"R{i:03d}, E.", f"S{i:03d}, F."), (b, a)))
    return _corpus(papers)
