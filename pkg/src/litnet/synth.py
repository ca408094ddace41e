"""Synthetic demonstration corpus with known expected output.

Twelve short articles whose finding sentences are planted so the whole
pipeline (PDF text, cleaning, sectioning, tagging, extraction, graph) has a
ground truth to be checked against. A thirteenth article matches no topical
keyword and must be filtered out; one file of garbage bytes must fail
ingestion without stopping the batch.

The PDFs are produced by reportlab, an independent writer, so the reader is
never tested against its own output.
"""

from __future__ import annotations

import csv
from pathlib import Path

# heading -> list of body sentences (each rendered as one line)
ARTICLES: list[dict] = [
    {
        "stem": "art01",
        "title": "Flood education programs in delta cities",
        "abstract": "We study how flood education shapes awareness and vulnerability.",
        "year": 2018,
        "areas": "ENVI;SOCI",
        "sections": [
            ("Introduction", ["Flooding is a growing hazard in many regions (Nguyen, 2019)."]),
            ("Methods", ["We surveyed households in three districts."]),
            ("Results", ["Education increases awareness (Smith, 2019)."]),
            ("Discussion", ["Income reduces vulnerability.",
                            "(c) 2018 Journal of Flood Studies. All rights reserved."]),
        ],
    },
    {
        "stem": "art02",
        "title": "Awareness and flood preparedness",
        "abstract": "Awareness campaigns and flood preparedness in coastal towns.",
        "year": 2019,
        "areas": "ENVI",
        "sections": [
            ("Introduction", ["Coastal towns face repeated flood events."]),
            ("Methods", ["Downloaded from https://journals.example.org on 4 May 2020."]),
            ("Results", ["Education increases awareness.",
                         "Awareness relates to preparedness.",
                         "More detail at http://example.org/flood."]),
        ],
    },
    {
        "stem": "art03",
        "title": "Schooling and flood adaptation choices",
        "abstract": "Flood adaptation among farming households.",
        "year": 2017,
        "areas": "AGRI",
        "sections": [
            ("Introduction", ["Adaptation choices differ widely."]),
            ("Methods", ["Interviews were coded by two raters."]),
            ("Results", ["Education has a positive correlation with adaptation.",
                         "Farmers adopt new practices."]),
        ],
    },
    {
        "stem": "art04",
        "title": "Income, migration, and flood exposure",
        "abstract": "Flood exposure and migration decisions.",
        "year": 2020,
        "areas": "SOCI",
        "sections": [
            ("Introduction", ["Migration is one response to hazard."]),
            ("Methods", ["Panel data from 2004 to 2018 were used."]),
            ("Results", ["Income has a negative association with migration."]),
        ],
    },
    {
        "stem": "art05",
        "title": "Trust and flood planning",
        "abstract": "Institutional trust in flood planning.",
        "year": 2016,
        "areas": "SOCI",
        "sections": [
            ("Introduction", ["Planning requires public cooperation."]),
            ("Methods", ["A survey instrument was piloted twice."]),
            ("Results", ["Trust has implications for planning.",
                         "Results show that education matters."]),
        ],
    },
    {
        "stem": "art06",
        "title": "Insurance uptake after floods",
        "abstract": "Flood insurance and recorded losses.",
        "year": 2021,
        "areas": "ECON",
        "sections": [
            ("Introduction", ["Insurance markets react to disasters."]),
            ("Methods", ["Claims records were anonymized."]),
            ("Results", ["Insurance reduces losses.",
                         "Insurance reduces losses."]),
            ("Discussion", ["Insurance prevents catastrophic losses."]),
        ],
    },
    {
        "stem": "art07",
        "title": "Savings buffers in flood recovery",
        "abstract": "Household savings and flood recovery speed.",
        "year": 2015,
        "areas": "ECON",
        "sections": [
            ("Introduction", ["Recovery speed varies across households."]),
            ("Methods", ["Recovery was tracked for two years."]),
            ("Results and Discussion", ["Savings improve preparedness."]),
        ],
    },
    {
        "stem": "art08",
        "title": "Age and flood alert uptake",
        "abstract": "Flood alert systems and age effects.",
        "year": 2019,
        "areas": "SOCI",
        "sections": [
            ("Introduction", ["Alert systems are widely deployed."]),
            ("Methods", ["Usage logs were matched to surveys."]),
            ("Results", ["Age reduces uptake and improves caution."]),
        ],
    },
    {
        "stem": "art09",
        "title": "Media, preparation, and flood resilience",
        "abstract": "Flood resilience and preparation behavior.",
        "year": 2022,
        "areas": "ENVI;SOCI",
        "sections": [
            ("Introduction", ["Preparation behavior is hard to shift."]),
            ("Methods", ["Two waves of interviews were held."]),
            ("Results", ["Awareness positively influences preparation."]),
            ("Conclusion", ["Education enhances resilience."]),
        ],
    },
    {
        "stem": "art10",
        "title": "Poverty and flood adaptation limits",
        "abstract": "Flood adaptation limits under poverty.",
        "year": 2018,
        "areas": "AGRI;SOCI",
        "sections": [
            ("Introduction", ["Adaptation limits are unevenly spread."]),
            ("Methods", ["Village records were digitized."]),
            ("Results", ["Poverty constrains adaptation.",
                         "Social networks link farmers to markets."]),
        ],
    },
    {
        "stem": "art11",
        "title": "Flood risk communication outcomes",
        "abstract": "Risk communication in flood-prone areas.",
        "year": 2020,
        "areas": "ENVI",
        "sections": [
            ("Introduction", ["Communication programs differ in reach."]),
            ("Methods", ["Program rollout was staggered."]),
            ("Results", ["Education increases awareness.",
                         "Climate change increases flood risk."]),
        ],
    },
    {
        "stem": "art12",
        "title": "Information channels in flood response",
        "abstract": "Information flow during flood response.",
        "year": 2021,
        "areas": "SOCI",
        "sections": [
            ("Introduction", ["Information travels along social ties."]),
            ("Methods", ["Message logs were sampled weekly."]),
            ("Results", ["Information affects trust."]),
            ("Discussion", ["Café owners showed naïve optimism."]),
        ],
    },
    # filtered out by the topical keyword list (no "flood" anywhere)
    {
        "stem": "art13",
        "title": "Urban gardening and community wellbeing",
        "abstract": "Gardening programs and neighborhood wellbeing.",
        "year": 2019,
        "areas": "SOCI",
        "sections": [
            ("Introduction", ["Gardens change how neighbors meet."]),
            ("Results", ["Gardening improves wellbeing."]),
        ],
    },
]

# (source_label, verb_lemma, sign, target_label) per article, post-dedup
EXPECTED_TRIPLES: dict[str, set[tuple[str, str, str, str]]] = {
    "art01": {("education", "increase", "positive", "awareness"),
              ("income", "reduce", "negative", "vulnerability")},
    "art02": {("education", "increase", "positive", "awareness"),
              ("awareness", "relate", "neutral", "preparedness")},
    "art03": {("education", "have", "positive", "adaptation")},
    "art04": {("income", "have", "negative", "migration")},
    "art05": {("trust", "have", "neutral", "implication"),
              ("result", "show", "neutral", "education")},
    "art06": {("insurance", "reduce", "negative", "loss"),
              ("insurance", "prevent", "negative", "catastrophic loss")},
    "art07": {("saving", "improve", "positive", "preparedness")},
    "art08": {("age", "reduce", "negative", "uptake"),
              ("uptake", "improve", "positive", "caution")},
    "art09": {("awareness", "influence", "positive", "preparation"),
              ("education", "enhance", "positive", "resilience")},
    "art10": {("poverty", "constrain", "negative", "adaptation"),
              ("social network", "link", "neutral", "farmer")},
    "art11": {("education", "increase", "positive", "awareness"),
              ("climate change", "increase", "positive", "flood risk")},
    "art12": {("information", "affect", "neutral", "trust"),
              ("cafe owner", "show", "neutral", "naive optimism")},
}

KEYWORDS = ["flood", "floods", "flooding", "flood-prone"]

N_KEPT_ARTICLES = 12


def _write_pdf(path: Path, article: dict) -> None:
    from reportlab.pdfgen import canvas

    c = canvas.Canvas(str(path), pagesize=(612, 792))
    c.setPageCompression(1)
    text = c.beginText(60, 730)
    text.setFont("Helvetica", 11)
    text.textLine(article["title"])
    text.textLine("")
    for heading, sentences in article["sections"]:
        text.textLine(heading)
        for sentence in sentences:
            text.textLine(sentence)
        text.textLine("")
    c.drawText(text)
    c.showPage()
    c.save()


def generate_corpus(dest: str | Path, include_broken: bool = True) -> Path:
    """Write pdfs/ and metadata.csv under `dest`; returns the corpus dir."""
    dest = Path(dest)
    pdf_dir = dest / "pdfs"
    pdf_dir.mkdir(parents=True, exist_ok=True)
    for article in ARTICLES:
        _write_pdf(pdf_dir / f"{article['stem']}.pdf", article)
    if include_broken:
        (pdf_dir / "broken.pdf").write_bytes(b"%PDF-1.4\ngarbage that is not really a pdf")
    with open(dest / "metadata.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "title", "abstract", "year", "areas"])
        for a in ARTICLES:
            writer.writerow([a["stem"], a["title"], a["abstract"], a["year"], a["areas"]])
    return dest


def write_config(dest: str | Path, **overrides) -> Path:
    """Config file pointing at a generated corpus; returns its path."""
    dest = Path(dest)
    lines = [
        f"corpus_dir: {dest.resolve()}",
        f"metadata_file: {(dest / 'metadata.csv').resolve()}",
        "column_map:",
        "  id: id",
        "  title: title",
        "  abstract: abstract",
        "  year: year",
        "  areas: areas",
        "keywords: [" + ", ".join(KEYWORDS) + "]",
        "seeds:",
        f"  sample: {overrides.get('sample_seed', 13)}",
        f"  cluster: {overrides.get('cluster_seed', 0)}",
    ]
    for key in ("sign_basis", "depend_no_cue", "rings"):
        if key in overrides:
            lines.append(f"{key}: {overrides[key]}")
    path = dest / "config.yaml"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
