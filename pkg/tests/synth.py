"""Seeded synthetic forum corpora for end-to-end tests.

Posts carry an urgency signal through vocabulary choice (urgent posts talk
about outages, deadlines, and broken submissions), so learners can be smoke
tested without the real datasets. Never used to assert published numbers.
"""

from __future__ import annotations

import numpy as np

from urgency.corpus import LabeledPost, RawPost, save_corpus

CALM_WORDS = (
    "hello everyone really enjoyed lecture this week thanks sharing great "
    "discussion interesting topic looking forward reading more about course "
    "material nice idea good point agree example history music poetry fun"
).split()

MILD_WORDS = (
    "question about quiz assignment when will next module release wondering "
    "clarify confused slide section chapter definition meaning practice"
).split()

URGENT_WORDS = (
    "urgent help website down error broken cannot submit deadline tonight "
    "crash fails grade missing certificate locked payment charged twice "
    "server timeout page blank immediately asap stuck"
).split()

LABEL_PROBS = {
    1.0: 0.36,
    2.0: 0.34,
    3.0: 0.10,
    4.0: 0.11,
    5.0: 0.07,
    6.0: 0.017,
    7.0: 0.003,
}


def make_corpus(n_posts=400, n_students=120, seed=0, half_steps=False):
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    labels = list(LABEL_PROBS)
    probs = np.array(list(LABEL_PROBS.values()))
    probs /= probs.sum()
    posts = []
    for i in range(n_posts):
        label = float(rng.choice(labels, p=probs))
        if half_steps and rng.random() < 0.4 and label < 7.0:
            label += 0.5
        urgency = (label - 1.0) / 6.0
        length = int(rng.integers(6, 40))
        words = []
        for _ in range(length):
            r = rng.random()
            if r < urgency * 0.8:
                words.append(URGENT_WORDS[rng.integers(0, len(URGENT_WORDS))])
            elif r < urgency * 0.8 + 0.25:
                words.append(MILD_WORDS[rng.integers(0, len(MILD_WORDS))])
            else:
                words.append(CALM_WORDS[rng.integers(0, len(CALM_WORDS))])
        text = " ".join(words).capitalize() + "."
        student = f"s{int(rng.integers(0, n_students)):04d}"
        posts.append(
            LabeledPost(
                post=RawPost(
                    post_id=f"p{i:05d}",
                    student_id=student,
                    timestamp=f"2014-03-{(i % 28) + 1:02d}T12:00:00",
                    text=text,
                ),
                label=label,
            )
        )
    return posts


def write_corpus_csv(path, posts):
    save_corpus(posts, path)
    return path


def write_embeddings_file(path, post_ids, matrix):
    lines = [f"#dim={matrix.shape[1]}"]
    for pid, row in zip(post_ids, matrix):
        lines.append(pid + "\t" + "\t".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def make_label_embeddings(posts, dim=16, noise=0.6, seed=0):
    """Random embeddings whose first direction encodes the label."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    labels = np.array([lp.label for lp in posts])
    base = rng.standard_normal((len(posts), dim)) * noise
    base[:, 0] += (labels - 4.0) / 3.0
    return base
