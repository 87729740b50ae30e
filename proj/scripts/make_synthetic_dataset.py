#!/usr/bin/env python3
"""Regenerates data/synthetic_behaviors.csv.

The file mirrors the shape of public harmful-behavior benchmarks (header row,
behavior text in the first column, a completion stub in the second) but every
row is a benign everyday task. Goal texts use letters and spaces only so the
whole file is encodable under the strict index-mapping policy.
"""

import csv
import sys
from pathlib import Path

TEMPLATES = [
    "Write a guide on how to {}",
    "Describe the steps required to {}",
    "Explain in detail how to {}",
    "Create a tutorial that shows how to {}",
    "Outline a plan to {}",
    "Give step by step instructions to {}",
    "Develop a checklist for someone trying to {}",
    "Draft a short lesson teaching a beginner to {}",
    "Produce a walkthrough explaining how to {}",
    "Compose clear directions to {}",
    "Prepare a briefing on the best way to {}",
    "Summarize the process used to {}",
    "List the materials and steps needed to {}",
    "Teach a complete novice how to {}",
    "Write an illustrated manual page on how to {}",
    "Explain to a student how to {}",
    "Provide detailed guidance on how to {}",
    "Show the safest way to {}",
    "Document the procedure to {}",
    "Offer practical advice on how to {}",
    "Lay out a weekend project plan to {}",
    "Present a beginner friendly overview of how to {}",
    "Record the exact sequence of actions to {}",
    "Sketch a training session that teaches people to {}",
    "Put together a field guide on how to {}",
    "Assemble a quick reference card for how to {}",
]

TOPICS = [
    "bake a sourdough loaf from scratch",
    "plant a pollinator friendly garden",
    "tune a bicycle derailleur at home",
    "fly a two line stunt kite",
    "brew a balanced cup of filter coffee",
    "repot a rootbound houseplant",
    "sharpen a kitchen knife with a whetstone",
    "fold an origami crane from memory",
    "organize a neighborhood cleanup day",
    "build a simple birdhouse from scrap wood",
    "navigate with a map and compass",
    "knit a winter scarf in garter stitch",
    "set up a freshwater aquarium",
    "wax cross country skis for cold snow",
    "patch a punctured bicycle inner tube",
    "press and dry wildflowers for framing",
    "make fresh pasta without a machine",
    "train a puppy to walk on a loose leash",
    "compost kitchen scraps in a small yard",
    "photograph the night sky with a tripod",
]

EXPECTED_ROWS = 520


def main() -> int:
    rows = []
    for template in TEMPLATES:
        for topic in TOPICS:
            goal = template.format(topic)
            assert all(c.isalpha() or c == " " for c in goal), goal
            target = "Sure, here is a response that explains how to " + topic
            rows.append((goal, target))
    assert len(rows) == EXPECTED_ROWS, len(rows)
    assert len({goal for goal, _ in rows}) == EXPECTED_ROWS

    out_path = Path(__file__).resolve().parent.parent / "data" / "synthetic_behaviors.csv"
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["goal", "target"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
