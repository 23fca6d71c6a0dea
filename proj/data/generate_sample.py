#!/usr/bin/env python3
"""Generate the synthetic sample bank and trace corpus under data/sample.

Questions are small self-contained puzzles with one correct option. Their
cognitive features are drawn so that calibrated difficulties spread over
roughly [-2.5, 2.5]. Output is deterministic for a given --seed.
"""

import argparse
import json
import random
from pathlib import Path

ROMAN = ["I", "II", "III", "IV"]
NAMES = ["Ana", "Ben", "Cal", "Dee", "Eli", "Fay", "Gus", "Hal", "Ivy", "Jon", "Kim", "Lou", "Mae", "Ned"]
NONCE = ["glim", "trop", "vask", "plen", "dorb", "quil", "masp", "frel", "zunt", "brov"]
DAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]
DAYS_ZH = ["星期一", "星期二", "星期三", "星期四", "星期五", "星期六", "星期日"]
# Gold Score bands by cognitive tier, with the tier shares used for sampling.
TIER_BANDS = [("Easy", 14.0, 19.9, 0.2), ("Medium", 20.0, 24.9, 0.4), ("Hard", 25.0, 29.9, 0.3), ("Expert", 30.0, 36.0, 0.1)]


def place(rng, correct, wrong):
    """Return (options, answer_roman) with the correct option at a random slot."""
    opts = list(wrong[:3])
    k = rng.randrange(4)
    opts.insert(k, correct)
    return opts, ROMAN[k]


def ordering(rng):
    people = rng.sample(NAMES, 4)
    facts = " ".join(f"{a} finished before {b}." for a, b in zip(people, people[1:]))
    ask_last = rng.random() < 0.5
    correct = people[-1] if ask_last else people[0]
    question = "Who finished last?" if ask_last else "Who finished first?"
    wrong = [p for p in people if p != correct]
    rng.shuffle(wrong)
    ctx = f"Four runners took part in a race. {facts} {question}"
    return ctx, *place(rng, correct, wrong), "ordering"


def syllogism(rng):
    a, b, c = rng.sample(NONCE, 3)
    ctx = f"All {a}s are {b}s. No {b}s are {c}s. Which statement must be true?"
    correct = f"No {a}s are {c}s."
    wrong = [f"Some {a}s are {c}s.", f"All {c}s are {a}s.", f"All {b}s are {a}s."]
    rng.shuffle(wrong)
    return ctx, *place(rng, correct, wrong), "deduction"


def parity(rng):
    lo = rng.randrange(4, 60)
    x = lo + 2 if lo % 2 == 0 else lo + 1
    ctx = f"A number is even, greater than {lo} and less than {lo + 3}. What is it?"
    wrong = [str(v) for v in (x - 1, x + 1, x + 3)]
    rng.shuffle(wrong)
    return ctx, *place(rng, str(x), wrong), "arithmetic"


def weekday(rng):
    start = rng.randrange(7)
    n = rng.randrange(3, 40)
    ctx = f"Today is {DAYS[start]}. Which day of the week will it be {n} days from today?"
    correct = DAYS[(start + n) % 7]
    wrong = rng.sample([d for d in DAYS if d != correct], 3)
    return ctx, *place(rng, correct, wrong), "temporal"


def weekday_zh(rng):
    start = rng.randrange(7)
    n = rng.randrange(3, 40)
    ctx = f"今天是{DAYS_ZH[start]}。{n}天之后是星期几？"
    correct = DAYS_ZH[(start + n) % 7]
    wrong = rng.sample([d for d in DAYS_ZH if d != correct], 3)
    return ctx, *place(rng, correct, wrong), "temporal"


def seating(rng):
    p = rng.sample(NAMES, 4)
    ctx = (f"{p[0]}, {p[1]}, {p[2]} and {p[3]} sit in a row of four seats. {p[0]} sits at the left end. "
           f"{p[1]} sits directly right of {p[0]}. {p[3]} does not sit next to {p[1]}. Who sits in the third seat?")
    wrong = [p[0], p[1], p[3]]
    rng.shuffle(wrong)
    return ctx, *place(rng, p[2], wrong), "spatial"


FAMILIES = [ordering, syllogism, parity, weekday, seating]


def features(rng):
    r = rng.random()
    acc = 0.0
    for tier, lo, hi, share in TIER_BANDS:
        acc += share
        if r <= acc:
            break
    gold = round(rng.uniform(lo, hi), 3)
    density = round(rng.uniform(0.5, 5.0), 3)
    segments = rng.randrange(20, 260)
    target_b = rng.uniform(-2.5, 2.5)
    log_len = target_b - (gold - 72) / 54 - 0.1 * (density - 2) + 3.17 - (segments - 100) / 200
    length = max(1, round(10 ** log_len))
    return {"gold_score": gold, "logic_density": density, "thinking_length": length,
            "segments": segments, "cognitive_tier": tier}


OPENERS = ["Let me look at the setup again.", "Start with what is fixed.", "First I list the facts."]
HYPOTHESES = ["Suppose the answer is {x}.", "Assume option {x} holds.", "What if it is {x}?"]
ELIMINATIONS = ["That contradicts the second fact, so rule it out.", "This cannot work, so eliminate it."]
STEPS = ["Step {k}: the order is forced here.", "Therefore the next position is fixed.",
         "Because the first rule applies, the count goes up by one.", "It follows that only one seat is left."]
REVERSALS = ["Wait, I misread the clue.", "Actually, the earlier count was off.", "Hmm, let me reconsider."]
HEDGES = ["It is probably the second one.", "Maybe the last option works.", "I am certain about the first constraint."]
DIALECTIC = ["On one hand the rule suggests early placement.", "On the other hand the last clue pushes it later.",
             "Taken together, the middle seat fits both."]
PRINCIPLES = ["In general, a chain of strict orderings has a unique minimum.", "For example, take the first pair."]


def trace_text(rng, answer_letter):
    paras = []
    paras.append(rng.choice(OPENERS))
    for _ in range(rng.randrange(1, 4)):
        x = rng.choice("ABCD")
        paras.append(rng.choice(HYPOTHESES).format(x=x) + " " + rng.choice(ELIMINATIONS))
    steps = [rng.choice(STEPS).format(k=k + 1) for k in range(rng.randrange(1, 5))]
    paras.append(" ".join(steps))
    if rng.random() < 0.6:
        paras.append(rng.choice(REVERSALS) + " " + rng.choice(HEDGES))
    if rng.random() < 0.4:
        paras.append(" ".join(DIALECTIC))
    if rng.random() < 0.5:
        paras.append(rng.choice(PRINCIPLES))
    paras.append(f"So the answer is {answer_letter}.\n\n{answer_letter}")
    return "\n\n".join(paras)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20260101)
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--traces", type=int, default=40)
    ap.add_argument("--out", type=Path, default=Path(__file__).parent / "sample")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)

    bank = []
    for k in range(args.count):
        zh = rng.random() < 0.1
        family = weekday_zh if zh else rng.choice(FAMILIES)
        ctx, opts, answer, rtype = family(rng)
        bank.append({
            "schema_version": 1,
            "id": f"q{k:04d}",
            "context": ctx,
            "options": dict(zip(ROMAN, opts)),
            "answer": answer,
            "language": "zh" if zh else "en",
            "source": "synthetic-sample",
            "reasoning_type": rtype,
            "features": features(rng),
        })
    (args.out / "atomic_bank.json").write_text(json.dumps(bank, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")

    with open(args.out / "traces.jsonl", "w", encoding="utf-8") as f:
        for q in bank[: args.traces]:
            letter = "ABCD"[ROMAN.index(q["answer"])]
            f.write(json.dumps({"question_id": q["id"], "text": trace_text(rng, letter)}) + "\n")


if __name__ == "__main__":
    main()
