#!/usr/bin/env python3
"""Regenerates the bundled toy corpora. Output is deterministic."""

import json
import random
from pathlib import Path

HERE = Path(__file__).resolve().parent

# ---------------------------------------------------------------------------
# SRL: (tokens, predicate index, spans) with spans as (role, start, end) inclusive.

SRL_BASIC = [
    ("The chef cooked a meal .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Mary reads books .", 1, [("ARG0", 0, 0), ("ARG1", 2, 2)]),
    ("A dog chased the cat in the garden .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("The students wrote long essays .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Tom painted the old fence yesterday .", 1, [("ARG0", 0, 0), ("ARG1", 2, 4)]),
    ("The company hired three engineers .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Anna opened the window .", 1, [("ARG0", 0, 0), ("ARG1", 2, 3)]),
    ("The farmer planted corn .", 2, [("ARG0", 0, 1), ("ARG1", 3, 3)]),
    ("Children love stories .", 1, [("ARG0", 0, 0), ("ARG1", 2, 2)]),
    ("The committee approved the new budget .", 2, [("ARG0", 0, 1), ("ARG1", 3, 5)]),
    ("Peter fixed his bike .", 1, [("ARG0", 0, 0), ("ARG1", 2, 3)]),
    ("The cat ate the fish .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Lisa sings songs every morning .", 1, [("ARG0", 0, 0), ("ARG1", 2, 2)]),
    ("The wind broke the branch .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Our team won the final match .", 2, [("ARG0", 0, 1), ("ARG1", 3, 5)]),
    ("David bought a car .", 1, [("ARG0", 0, 0), ("ARG1", 2, 3)]),
    ("John said Mary bought a car .", 1, [("ARG0", 0, 0), ("ARG1", 2, 5)]),
    ("John said Mary bought a car .", 3, [("ARG0", 2, 2), ("ARG1", 4, 5)]),
    ("The teacher explained the lesson .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Birds build nests .", 1, [("ARG0", 0, 0), ("ARG1", 2, 2)]),
    ("The police arrested the thief .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Sarah baked a cake and Mark washed the dishes .", 1, [("ARG0", 0, 0), ("ARG1", 2, 3)]),
    ("Sarah baked a cake and Mark washed the dishes .", 6, [("ARG0", 5, 5), ("ARG1", 7, 8)]),
    ("The boy kicked the ball over the wall .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Engineers designed a bridge .", 1, [("ARG0", 0, 0), ("ARG1", 2, 3)]),
    ("The storm destroyed several houses .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Kate answered the question quickly .", 1, [("ARG0", 0, 0), ("ARG1", 2, 3)]),
    ("The museum displays ancient coins .", 2, [("ARG0", 0, 1), ("ARG1", 3, 4)]),
    ("Workers repaired the road .", 1, [("ARG0", 0, 0), ("ARG1", 2, 3)]),
    ("The man parasails in the choppy water .", 2, [("ARG0", 0, 1)]),
]

SRL_EXTRA = [
    ("Charlie sold a book to Sherry last week .", 1,
     [("ARG0", 0, 0), ("ARG1", 2, 3), ("ARG2", 4, 5), ("AM-TMP", 6, 7)]),
    ("Anna gave a gift to her brother yesterday .", 1,
     [("ARG0", 0, 0), ("ARG1", 2, 3), ("ARG2", 4, 6), ("AM-TMP", 7, 7)]),
    ("The bank lent money to the farmers last year .", 2,
     [("ARG0", 0, 1), ("ARG1", 3, 3), ("ARG2", 4, 6), ("AM-TMP", 7, 8)]),
    ("Tom sent a letter to Mary on Monday .", 1,
     [("ARG0", 0, 0), ("ARG1", 2, 3), ("ARG2", 4, 5), ("AM-TMP", 6, 7)]),
    ("Sherry sold her car to Charlie last month .", 1,
     [("ARG0", 0, 0), ("ARG1", 2, 3), ("ARG2", 4, 5), ("AM-TMP", 6, 7)]),
    ("The school offered a prize to the winner .", 2,
     [("ARG0", 0, 1), ("ARG1", 3, 4), ("ARG2", 5, 7)]),
    ("Mark showed the photos to his friends last night .", 1,
     [("ARG0", 0, 0), ("ARG1", 2, 3), ("ARG2", 4, 6), ("AM-TMP", 7, 8)]),
    ("Heat and pressure change the mineral content of a rock .", 3,
     [("ARG0", 0, 2), ("ARG1", 4, 9)]),
    ("A man parasails in the choppy water .", 2, [("ARG0", 0, 1)]),
    ("The water was choppy as the man parasailed .", 7, [("ARG0", 5, 6)]),
]


def bio(n, spans):
    tags = ["O"] * n
    for role, s, e in spans:
        tags[s] = "B-" + role
        for i in range(s + 1, e + 1):
            tags[i] = "I-" + role
    return tags


def srl_block(sentence, pred, spans):
    toks = sentence.split()
    assert not any(s <= pred <= e for _, s, e in spans), sentence
    tags = bio(len(toks), spans)
    tags[pred] = "B-V"
    return "".join(f"{t}\t{1 if i == pred else 0}\t{tag}\n" for i, (t, tag) in enumerate(zip(toks, tags)))


def write_srl(path, rows, header):
    with open(path, "w") as f:
        f.write(header)
        f.write("\n".join(srl_block(*r) for r in rows))


# ---------------------------------------------------------------------------
# NLI

SUBJECTS = ["man", "woman", "boy", "girl", "dog", "cyclist", "chef", "child", "musician", "teacher", "farmer",
            "dancer", "runner", "painter", "sailor", "student", "nurse", "pilot", "driver", "baker"]
ACTIONS = [("walks", "walked", "street"), ("swims", "swam", "lake"), ("sits", "sat", "park"),
           ("waits", "waited", "station"), ("sleeps", "slept", "room"), ("reads", "read", "library"),
           ("plays", "played", "yard"), ("runs", "ran", "field"), ("sings", "sang", "hall"),
           ("works", "worked", "kitchen")]
ADJ = [("crowded", "empty"), ("noisy", "quiet"), ("dark", "bright"), ("cold", "warm"), ("wet", "dry"),
       ("small", "large"), ("old", "new"), ("busy", "calm")]
NEUTRAL = ["is waiting for a friend", "is very tired", "is on vacation", "is late for work",
           "is competing in a competition", "is happy today", "is wearing a red hat", "is thinking about dinner"]


def nli_pairs(rng, count, offset):
    out = []
    labels = ["entailment", "contradiction", "neutral"]
    for k in range(count):
        subj = SUBJECTS[(k + offset) % len(SUBJECTS)]
        pres, past, place = ACTIONS[(k * 7 + offset) % len(ACTIONS)]
        adj, opp = ADJ[(k * 3 + offset) % len(ADJ)]
        premise = f"A {subj} {pres} in the {adj} {place}."
        label = labels[k % 3]
        if label == "entailment":
            hyp = rng.choice([f"The {place} was {adj} as the {subj} {past}.", f"A {subj} {pres} in a {adj} {place}."])
        elif label == "contradiction":
            hyp = rng.choice([f"The {subj} {past} in the {opp} {place}.", f"The {place} was {opp} as the {subj} {past}."])
        else:
            hyp = f"The {subj} {rng.choice(NEUTRAL)}."
        out.append({"sentence1": premise, "sentence2": hyp, "gold_label": label})
    return out


TABLE2 = [
    {"sentence1": "A man parasails in the choppy water.", "sentence2": "The man is competing in a competition.",
     "gold_label": "neutral"},
    {"sentence1": "A man parasails in the choppy water.", "sentence2": "The man parasailed in the calm water.",
     "gold_label": "contradiction"},
    {"sentence1": "A man parasails in the choppy water.", "sentence2": "The water was choppy as the man parasailed.",
     "gold_label": "entailment"},
]


def write_jsonl(path, rows):
    with open(path, "w") as f:
        for r in rows:
            f.write(json.dumps(r, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Reading comprehension (SQuAD v1.1 layout)

ROCK = ("There are three major types of rock: igneous, sedimentary, and metamorphic. The rock cycle is an important "
        "concept in geology which illustrates the relationships between these three types of rock, and magma. When a "
        "rock crystallizes from melt (magma and/or lava), it is an igneous rock. This rock can be weathered and eroded, "
        "and then redeposited and lithified into a sedimentary rock, or be turned into a metamorphic rock due to heat "
        "and pressure that change the mineral content of the rock which gives it a characteristic fabric. The "
        "sedimentary rock can then be subsequently turned into a metamorphic rock due to heat and pressure and is then "
        "weathered, eroded, deposited, and lithified, ultimately becoming a sedimentary rock. Sedimentary rock may also "
        "be re-eroded and redeposited, and metamorphic rock may also undergo additional metamorphism. All three types "
        "of rocks may be re-melted; when this happens, a new magma is formed, from which an igneous rock may once "
        "again crystallize.")

TOWNS = ["Arlen", "Brookfield", "Corvin", "Dunmore", "Elston", "Farrow", "Glenby", "Harlow", "Iverton", "Jasper",
         "Kelso", "Lindell", "Marlow", "Norwick", "Oakham"]
FOUNDERS = ["Henry Blake", "Maria Lopez", "Samuel Reed", "Clara Hughes", "Victor Hale", "Ada Finch", "Oscar Nye",
            "Ruth Malone", "Felix Grant", "Nora Webb", "Ivan Petrov", "Lena Ortiz", "Paul Ward", "Edith Moss",
            "Hugo Lind"]
RIVERS = ["Tane", "Orva", "Milden", "Caspar", "Ebon", "Soren", "Wyle", "Ardent", "Blue", "Silver", "Kestrel",
          "Amber", "Lark", "Stone", "Willow"]
INDUSTRY = ["fishing", "textile weaving", "coal mining", "shipbuilding", "wine making", "glass blowing", "logging",
            "pottery", "paper milling", "salt harvesting", "cheese making", "tin mining", "rope making",
            "wool spinning", "brick making"]


def answer(context, text, occurrence=0):
    start = -1
    for _ in range(occurrence + 1):
        start = context.index(text, start + 1)
    return {"text": text, "answer_start": start}


def town_paragraph(k):
    town, founder, river, industry = TOWNS[k], FOUNDERS[k], RIVERS[k], INDUSTRY[k]
    year = str(1700 + 13 * k)
    ctx = (f"The town of {town} lies on the {river} River. It was founded in {year} by {founder}. "
           f"Its main industry is {industry}, and the town holds a market every week.")
    qas = [
        (f"Who founded {town}?", founder),
        (f"When was {town} founded?", year),
        (f"What is the main industry of {town}?", industry),
        (f"Which river does {town} lie on?", f"{river} River"),
    ]
    return {"context": ctx,
            "qas": [{"id": f"{town.lower()}-{i}", "question": q, "answers": [answer(ctx, a)]}
                    for i, (q, a) in enumerate(qas)]}


def squad(paragraphs):
    return {"version": "1.1", "data": [{"title": "toy", "paragraphs": paragraphs}]}


def main():
    write_srl(HERE / "srl_basic.conll", SRL_BASIC,
              "# token<TAB>predicate flag<TAB>BIO tag; roles ARG0, ARG1, V\n")
    write_srl(HERE / "srl_full.conll", SRL_BASIC + SRL_EXTRA,
              "# token<TAB>predicate flag<TAB>BIO tag; adds ARG2 and AM-TMP\n")

    rng = random.Random(7)
    train = nli_pairs(rng, 197, 0) + TABLE2
    rng.shuffle(train)
    write_jsonl(HERE / "nli_train.jsonl", train)
    dev = nli_pairs(rng, 30, 5) + [{"sentence1": "A man sits.", "sentence2": "Someone sits.", "gold_label": "-"}]
    write_jsonl(HERE / "nli_dev.jsonl", dev)
    write_jsonl(HERE / "nli_test.jsonl", nli_pairs(rng, 30, 11))

    rock = {"context": ROCK, "qas": [
        {"id": "rock-0", "question": "What changes the mineral content of a rock?",
         "answers": [answer(ROCK, "heat and pressure")]},
        {"id": "rock-1", "question": "What are the three major types of rock?",
         "answers": [answer(ROCK, "igneous, sedimentary, and metamorphic")]},
    ]}
    paragraphs = [rock] + [town_paragraph(k) for k in range(12)]
    with open(HERE / "squad_train.json", "w") as f:
        json.dump(squad(paragraphs), f, indent=1)
    with open(HERE / "squad_dev.json", "w") as f:
        json.dump(squad([town_paragraph(k) for k in range(12, 15)]), f, indent=1)


if __name__ == "__main__":
    main()
