#!/usr/bin/env python3
#
# Copyright 2026 The Augmenta Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""Regenerates the bundled toy tasks under data/tasks/toy."""

import json
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "tasks" / "toy"
SIZES = {"train": 32, "dev": 16, "test": 64}

SUBJECTS = ["the movie", "this phone", "the hotel", "our dinner", "the concert",
            "the new album", "this laptop", "the service", "the game", "the book",
            "the trip", "the coffee"]
POSITIVE = ["great", "wonderful", "excellent", "lovely", "fantastic", "pleasant",
            "brilliant", "delightful", "superb", "good"]
NEGATIVE = ["terrible", "awful", "boring", "poor", "disappointing", "bad",
            "horrible", "dull", "broken", "annoying"]
FRAMES = ["{s} was {a} and i would go again", "honestly {s} felt {a} from start to end",
          "i think {s} is {a} overall", "{s} turned out {a} for the price",
          "my friends said {s} was {a}", "after a week {s} still seems {a}"]

TOPICS = {
    "sports": ["team", "coach", "goal", "match", "season", "players", "league", "score"],
    "science": ["experiment", "cells", "telescope", "physics", "researchers", "molecule", "data", "lab"],
    "business": ["market", "shares", "profit", "company", "investors", "revenue", "bank", "merger"],
}
TOPIC_FRAMES = ["the {a} reported news about the {b} today",
                "a report on the {a} and the {b} came out this morning",
                "experts discussed the {a} after the {b} changed",
                "everyone is talking about the {a} and its {b}"]

ANIMALS = {
    "fly": ["eagle", "sparrow", "owl", "parrot", "bat", "pigeon"],
    "swim": ["salmon", "dolphin", "shark", "trout", "whale", "tuna"],
    "run": ["horse", "cheetah", "dog", "deer", "rabbit", "wolf"],
}
ABILITY_FRAMES = ["which animal can {v} best", "pick the animal that would {v} well",
                  "which of these is known to {v}", "name the creature that can {v}"]

OPPOSITES = [("hot", "cold"), ("up", "down"), ("early", "late"), ("big", "small"),
             ("fast", "slow"), ("light", "dark"), ("open", "closed"), ("full", "empty"),
             ("happy", "sad"), ("hard", "soft"), ("loud", "quiet"), ("rich", "poor"),
             ("young", "old"), ("strong", "weak"), ("wet", "dry"), ("near", "far")]
OPP_FRAMES = ["what is the opposite of {w}", "choose the antonym of the word {w}",
              "which word means the reverse of {w}", "find the word opposite to {w}"]


def sentiment(rng):
    label = rng.choice(["positive", "negative"])
    adj = rng.choice(POSITIVE if label == "positive" else NEGATIVE)
    text = rng.choice(FRAMES).format(s=rng.choice(SUBJECTS), a=adj)
    return text, label, ["negative", "positive"]


def topic(rng):
    label = rng.choice(sorted(TOPICS))
    a, b = rng.sample(TOPICS[label], 2)
    return rng.choice(TOPIC_FRAMES).format(a=a, b=b), label, ["business", "science", "sports"]


def ability(rng):
    verb = rng.choice(sorted(ANIMALS))
    gold = rng.choice(ANIMALS[verb])
    others = [rng.choice(ANIMALS[v]) for v in sorted(ANIMALS) if v != verb]
    options = [gold] + others
    rng.shuffle(options)
    return rng.choice(ABILITY_FRAMES).format(v=verb), gold, options


def opposite(rng):
    pair = rng.choice(OPPOSITES)
    word, gold = pair if rng.random() < 0.5 else pair[::-1]
    distract = [w for p in rng.sample(OPPOSITES, 3) if p != pair for w in p]
    options = [gold] + rng.sample(distract, 2)
    rng.shuffle(options)
    return rng.choice(OPP_FRAMES).format(w=word), gold, options


TASKS = [
    ("toy_sentiment", "classification", sentiment, 101),
    ("toy_topic", "classification", topic, 202),
    ("toy_animal_ability", "non_classification", ability, 303),
    ("toy_antonym", "non_classification", opposite, 404),
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, kind, gen, seed in TASKS:
        rng = random.Random(seed)
        lines = []
        for split in ("train", "dev", "test"):
            for _ in range(SIZES[split]):
                text, out, options = gen(rng)
                lines.append(json.dumps({"split": split, "input": text, "output": out,
                                         "options": options}))
        (OUT / f"{name}.jsonl").write_text("\n".join(lines) + "\n")
        (OUT / f"{name}.manifest.json").write_text(
            json.dumps({"task": name, "kind": kind}) + "\n")


if __name__ == "__main__":
    main()
