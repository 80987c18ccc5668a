"""Regenerate the bundled example documents in src/vatcarto/data."""

from pathlib import Path

from vatcarto.cartography import Presentation
from vatcarto.cuts import SignChoice, order_focus
from vatcarto.document import Document, emit
from vatcarto.region import Region
from vatcarto.strips import construct_admissible

OUT = Path(__file__).resolve().parents[1] / "src" / "vatcarto" / "data"


def doc(region, points, eps0, offset=0, choices=(), with_triple=False):
    focus = order_focus(points, offset, region)
    pres = Presentation(region, focus, SignChoice(tuple(eps0)))
    choices = [SignChoice(tuple(c)) for c in choices]
    triples = [construct_admissible(region, focus, choices[0])] if with_triple else []
    return Document(pres, choices, triples)


def main():
    square = Region.box(0, 4, 0, 4)
    docs = {
        "square_empty": doc(square, [], []),
        "square_one_ff": doc(square, [(2, 2)], [1], choices=[[-1]], with_triple=True),
        "two_ff_one_line": doc(square, [(2, 1), (2, 3)], [1, 1], choices=[[-1, 1]], with_triple=True),
        "negative_window": doc(Region.box(0, 6, 0, 4), [(2, 2), (4, 2)], [1, 1], offset=-1,
                               choices=[[-1, -1]], with_triple=True),
    }
    for name, d in docs.items():
        (OUT / f"{name}.json").write_text(emit(d))


if __name__ == "__main__":
    main()
