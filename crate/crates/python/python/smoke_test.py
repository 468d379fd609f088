"""Smoke test for the pyctxspell extension module."""

import os
import random
import tempfile

import pyctxspell


def to_too_corpus(n=400, seed=2):
    rng = random.Random(seed)
    lines = []
    for _ in range(n):
        if rng.random() < 0.5:
            word, nxt = "too", rng.choice(["late", "much", "big", "early", "hot"])
        else:
            word, nxt = "to", rng.choice(["the", "go", "school", "see", "work"])
        lines.append(f"q{rng.randrange(60)} it was {word} {nxt} q{rng.randrange(60)} .")
    return "\n".join(lines) + "\n"


def main():
    toks = pyctxspell.tokenize("It's not to late.")
    assert [t[0] for t in toks] == ["It's", "not", "to", "late", "."], toks

    assert abs(pyctxspell.chi_square([[10, 0], [0, 10]]) - 20.0) < 1e-9

    node = pyctxspell.WinnowNode(beta=0.5)
    for _ in range(20):
        node.update([1, 2], True)
        node.update([3, 4], False)
    assert node.predict([1, 2]) and not node.predict([3, 4])
    assert all(w > 0 for w in node.weights().values())

    corpus = to_too_corpus()
    fixer = pyctxspell.Corrector.train(corpus, "to|too\n", sentences_per_line=True)
    assert fixer.corrections("It's not to late .") == [(1, 10, "to", "too")]
    assert fixer.apply("It's not to late .") == "It's not too late ."

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "m.model")
        fixer.save(path)
        again = pyctxspell.Corrector.load(path, sentences_per_line=True)
        assert again.to_text() == fixer.to_text()
        assert again.sets() == [["to", "too"]]

    report = pyctxspell.run_within(corpus, "to|too\n", sentences_per_line=True)
    assert report.splitlines()[0].startswith("Confusion set\t")
    assert any(line.startswith("Overall\t") for line in report.splitlines())

    try:
        pyctxspell.Corrector.load("/nonexistent/model")
    except OSError:
        pass
    else:
        raise AssertionError("expected OSError")

    print("pyctxspell smoke test passed")


if __name__ == "__main__":
    main()
