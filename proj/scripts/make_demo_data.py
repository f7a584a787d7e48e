#!/usr/bin/env python3
"""Regenerate the synthetic demo fixtures in data/demo/.

The fixtures are shaped like the study's data (labeled training posts, a
multi-community post scrape, an annotation sheet) but the text is synthetic.
Output is deterministic for a given seed.
"""
import argparse
import csv
import datetime as dt
import random
from pathlib import Path

STRESS = [
    "I am so anxious about my exams and cannot sleep",
    "deadline tomorrow and I am panicking about the thesis",
    "my advisor keeps yelling and I feel terrible and afraid",
    "I failed the midterm and I am scared I will lose my funding",
    "overwhelmed by grading, I cry every night",
    "so much pressure, I feel hopeless and exhausted",
    "my grandfather died the day before an exam and I am mourning",
    "worried sick about rent and tuition, everything is falling apart",
    "I hate this semester, constant fear of failing",
    "burnout is killing me, I am depressed and alone",
]
CALM = [
    "just finished a fun project with my lab mates",
    "any recommendations for a good linear algebra textbook",
    "happy to share that my paper got accepted",
    "what is the best way to organize lecture notes",
    "enjoyed the campus coffee festival today",
    "looking for a study group for the algorithms course",
    "great seminar on machine learning this afternoon",
    "how do you format citations in latex",
    "thanks everyone for the helpful advice last week",
    "our team won the hackathon and celebrated",
]
FILLER = ["today", "class", "professor", "student", "week", "work", "time", "course", "lab", "campus"]
COMMUNITIES = {
    "csMajors": 0.30,
    "EngineeringStudents": 0.28,
    "GradSchool": 0.32,
    "PhD": 0.25,
    "Professors": 0.30,
}


def sentence(rng, stressed):
    base = rng.choice(STRESS if stressed else CALM)
    # Mix in an opposite-class fragment sometimes so the task is not trivially separable.
    if rng.random() < 0.2:
        base += " " + rng.choice(CALM if stressed else STRESS)
    extra = " ".join(rng.choice(FILLER) for _ in range(rng.randint(0, 4)))
    return (base + " " + extra).strip()


def labeled(rng, n, prefix):
    rows = []
    for i in range(n):
        y = 1 if rng.random() < 0.5 else 0
        rows.append({"id": f"{prefix}{i:04d}", "text": sentence(rng, y), "label": y,
                     "domain": rng.choice(["anxiety", "stress", "school", "work", "social"])})
    return rows


def posts(rng, n):
    rows = []
    start = dt.datetime(2022, 9, 1, tzinfo=dt.timezone.utc)
    names = list(COMMUNITIES)
    for i in range(n):
        community = names[i % len(names)]
        y = 1 if rng.random() < COMMUNITIES[community] else 0
        when = start + dt.timedelta(seconds=rng.randint(0, 364 * 86400))
        date = "" if rng.random() < 0.02 else when.strftime("%Y-%m-%dT%H:%M:%SZ")
        title = rng.choice(["Help", "Question", "Rant", "Update", ""])
        rows.append({"id": f"p{i:05d}", "date": date, "title": title, "text": sentence(rng, y),
                     "score": max(0, int(rng.gauss(4 if y else 6, 4))),
                     "tag": rng.choice(["", "Vent", "Advice", "Discussion"]),
                     "community": community, "kind": rng.choice(["post", "comment"])})
    return rows


def annotations(rng, n_items, n_annotators):
    items = []
    for j in range(n_items):
        y = 1 if rng.random() < 0.5 else 0
        truth = rng.randint(-5, -1) if y else rng.randint(0, 5)
        scores = []
        for a in range(n_annotators):
            if a == n_annotators - 1:
                s = -truth if rng.random() < 0.6 else truth  # the unreliable annotator
            else:
                s = max(-5, min(5, truth + rng.randint(-1, 1)))
            scores.append("" if rng.random() < 0.03 else str(s))
        items.append([f"a{j:03d}", sentence(rng, y)] + scores)
    return items


def write(path, fieldnames, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=fieldnames, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Path(__file__).resolve().parent.parent / "data" / "demo", type=Path)
    ap.add_argument("--seed", default=7, type=int)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)

    write(args.out / "train.csv", ["id", "text", "label", "domain"], labeled(rng, 400, "t"))
    write(args.out / "test.csv", ["id", "text", "label", "domain"], labeled(rng, 120, "v"))
    write(args.out / "posts.csv", ["id", "date", "title", "text", "score", "tag", "community", "kind"],
          posts(rng, 600))
    with open(args.out / "groups.csv", "w", newline="", encoding="utf-8") as f:
        f.write("community,group\ncsMajors,Bachelor\nEngineeringStudents,Bachelor\n"
                "GradSchool,Graduate\nPhD,PhD\nProfessors,Professors\n")
    annotators = [f"ann{k}" for k in range(1, 6)]
    with open(args.out / "annotations.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["item_id", "text"] + annotators)
        w.writerows(annotations(rng, 60, len(annotators)))
    with open(args.out / "weights.csv", "w", newline="", encoding="utf-8") as f:
        f.write("annotator_id,weight\nann1,2\nann2,1\nann3,1\nann4,1.5\nann5,1\n")


if __name__ == "__main__":
    main()
