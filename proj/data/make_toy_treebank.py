#!/usr/bin/env python3
"""Writes the toy PP-attachment treebank used by the tests (tags.g shape).

Most prepositional phrases attach to the nearest noun; a minority attach to
the verb phrase. Output is deterministic for a given seed.

    python3 make_toy_treebank.py train 128 11 > toy_train.trees
"""
import random
import sys

NOUNS = {"sg": ["dog", "park", "man", "telescope", "book", "garden"],
         "pl": ["dogs", "parks", "men", "telescopes", "books", "gardens"]}
ADJ = ["old", "small", "green"]
VVN = ["broken", "painted"]
VERB = {"sg": ["sees", "likes", "reads"], "pl": ["see", "like", "read"]}
PREP = ["in", "with", "near"]


class NP:
    def __init__(self, rng, allow_bare=True):
        self.num = rng.choice(["sg", "pl"])
        self.det = not (allow_bare and self.num == "pl" and rng.random() < 0.3)
        self.mods = []
        for _ in range(rng.choice([0, 0, 0, 1, 1, 2])):
            if rng.random() < 0.2:
                self.mods.append(("AP", rng.choice(VVN) + "_VVN"))
            else:
                self.mods.append(("AP", rng.choice(ADJ) + "_JJ"))
        tag = "NN1" if self.num == "sg" else "NN2"
        self.noun = rng.choice(NOUNS[self.num]) + "_" + tag
        self.pps = []

    def render(self):
        n1 = "(N1 " + " ".join("(AP %s)" % w for _, w in self.mods) + (" " if self.mods else "")
        n1 += "(N0 %s))" % self.noun
        for pp in self.pps:
            n1 = "(N1 %s %s)" % (n1, pp.render())
        return "(NP the_AT %s)" % n1 if self.det else "(NP %s)" % n1


class PP:
    def __init__(self, rng):
        self.prep = rng.choice(PREP) + "_II"
        self.np = NP(rng)

    def render(self):
        return "(PP %s %s)" % (self.prep, self.np.render())


def sentence(rng):
    subj = NP(rng)
    verb = rng.choice(VERB[subj.num]) + ("_VVZ" if subj.num == "sg" else "_VV0")
    obj = NP(rng) if rng.random() < 0.8 else None
    vp_pps = []
    open_np = obj  # the NP a following PP may attach to
    for _ in range(rng.choice([1, 1, 2, 2, 3])):
        pp = PP(rng)
        if open_np is not None and rng.random() < 0.8:
            open_np.pps.append(pp)
        else:
            vp_pps.append(pp)
        open_np = pp.np
    vp = "(VP %s%s)" % (verb, " " + obj.render() if obj else "")
    for pp in vp_pps:
        vp = "(VP %s %s)" % (vp, pp.render())
    s = "(S %s %s)" % (subj.render(), vp)
    if rng.random() < 0.1:
        return "(T %s (Tadj ,_, %s))" % (s, NP(rng).render())
    return "(T %s)" % s


def main():
    name, count, seed = sys.argv[1], int(sys.argv[2]), int(sys.argv[3])
    rng = random.Random(seed)
    print("# toy %s treebank, seed %d" % (name, seed))
    for _ in range(count):
        print(sentence(rng))


if __name__ == "__main__":
    main()
