#!/usr/bin/env python3
"""Regenerates the end-to-end fixture (SERP files, pages, mock judge table).

queries.jsonl needs challenge ids, so it is written in a second step:
  python3 make_fixture.py
  forge -c config.json --set paths.work_dir=/tmp/w collect   (then filter,
  extract, dedup)
  python3 make_fixture.py --label /tmp/w
"""
import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent

# theme -> [(title, wish, daily_action)]
THEMES = {
    "sleep": [
        ("Screen curfew", "sleep better", "Turn off all screens one hour before bed"),
        ("Fixed bedtime", "sleep better", "Go to bed at the same time every night"),
        ("Wind down", "fall asleep faster", "Read a paper book for twenty minutes before sleep"),
        ("Cool bedroom", "sleep more deeply", "Set the bedroom thermostat to a cool temperature at night"),
        ("Early riser", "become a morning person", "Wake up thirty minutes earlier than usual"),
    ],
    "fitness": [
        ("Daily pushups", "get stronger", "Do twenty pushups every morning"),
        ("Step goal", "be more active", "Walk ten thousand steps each day"),
        ("Plank hold", "build core strength", "Hold a plank for one minute"),
        ("Stair climber", "improve stamina", "Take the stairs instead of the elevator"),
        ("Morning stretch", "become more flexible", "Stretch your hamstrings for ten minutes"),
    ],
    "hydration": [
        ("Water tracker", "drink more water", "Drink eight glasses of water"),
        ("Soda swap", "cut out sugary drinks", "Replace every soda with sparkling water"),
        ("Bottle buddy", "stay hydrated", "Carry a refillable water bottle everywhere"),
    ],
    "study": [
        ("SAT drills", "prepare for the SAT", "Solve ten SAT math practice problems"),
        ("Vocab builder", "prepare for the SAT", "Learn five new SAT vocabulary words"),
        ("Flashcard habit", "study more effectively", "Review flashcards for fifteen minutes"),
        ("Pomodoro study", "focus while studying", "Study in two focused pomodoro sessions"),
    ],
    "stress": [
        ("Box breathing", "feel less stressed", "Practice box breathing for five minutes"),
        ("Worry journal", "manage anxiety", "Write down your worries before lunch"),
        ("Nature break", "reduce stress", "Spend fifteen minutes outside in nature"),
        ("Meditation", "feel calmer", "Meditate for ten minutes with a guided app"),
    ],
    "finance": [
        ("No spend day", "save more money", "Spend nothing except on essential bills"),
        ("Expense log", "budget better", "Record every purchase in a spending log"),
        ("Coin jar", "build savings", "Put all spare change into a savings jar"),
    ],
    "gratitude": [
        ("Gratitude list", "be more grateful", "Write three things you are grateful for"),
        ("Thank you note", "show appreciation", "Thank one friend for something they did"),
    ],
    "cooking": [
        ("Home chef", "cook more at home", "Cook one dinner from scratch"),
        ("Veggie boost", "eat healthier", "Add a serving of vegetables to every meal"),
        ("Meal prep", "eat healthier", "Prepare tomorrow's lunch the night before"),
    ],
}

# Paraphrases of existing challenges published on other pages, and whether
# the mock judge calls them duplicates of the original.
PARAPHRASES = [
    ("sleep", 0, ("No screens at night", "sleep better", "Turn off all screens an hour before going to bed")),
    ("fitness", 1, ("10k steps", "be more active", "Walk ten thousand steps every single day")),
    ("hydration", 0, ("Eight a day", "drink more water", "Drink at least eight glasses of water daily")),
    ("stress", 0, ("Square breathing", "feel less stressed", "Do five minutes of box breathing")),
    ("finance", 1, ("Track spending", "budget better", "Log every purchase you make in a spending journal")),
    ("cooking", 1, ("More veggies", "eat healthier", "Add vegetables to every single meal")),
]

# Near neighbours that are different challenges; the judge says no.
DISTINCT_NEIGHBOURS = [
    ("sleep", ("Afternoon nap", "feel rested", "Take a twenty minute nap after lunch")),
    ("fitness", ("Evening pushups", "get stronger", "Do twenty pushups every evening before dinner")),
    ("hydration", ("Tea time", "drink more water", "Drink a glass of herbal tea each afternoon")),
]

# (id, text, tier, relevant daily actions; paraphrases of these count too)
QUERIES = [
    ("e01", "sleep better", "general", [a for _, _, a in THEMES["sleep"]]),
    ("e02", "get fit and be more active", "general", [a for _, _, a in THEMES["fitness"]]),
    ("e03", "save money", "general", [a for _, _, a in THEMES["finance"]]),
    ("e04", "feel less stressed", "general", [a for _, _, a in THEMES["stress"]]),
    ("e05", "drink more water every day", "fairly_specific",
     ["Drink eight glasses of water", "Carry a refillable water bottle everywhere"]),
    ("e06", "eat healthier meals at home", "fairly_specific", [a for _, _, a in THEMES["cooking"]]),
    ("e07", "study for exams with flashcards and focus", "fairly_specific",
     ["Review flashcards for fifteen minutes", "Study in two focused pomodoro sessions"]),
    ("e08", "stop using screens before bed so I sleep", "fairly_specific",
     ["Turn off all screens one hour before bed", "Read a paper book for twenty minutes before sleep"]),
    ("e09", "prepare for the SAT math section", "ultra_specific", ["Solve ten SAT math practice problems"]),
    ("e10", "do pushups every morning to get stronger", "ultra_specific", ["Do twenty pushups every morning"]),
    ("e11", "write down what I am grateful for", "ultra_specific", ["Write three things you are grateful for"]),
    ("e12", "replace soda with sparkling water", "ultra_specific", ["Replace every soda with sparkling water"]),
]

PAGES = [
    # (url, title, themes to list, score)
    ("https://www.habitlab.example/30-day-sleep-challenges", "30 Day Sleep Challenges", ["sleep"], 9),
    ("https://fitfolks.example/blog/monthly-fitness-challenge", "Monthly Fitness Challenge", ["fitness"], 8),
    ("https://www.wellnest.example/hydration-habit", "Hydration Habit Guide", ["hydration"], 7),
    ("https://studysmart.example/sat-30-day-plan", "A 30 Day SAT Plan", ["study"], 9),
    ("https://calmcorner.example/stress-challenges", "Stress Less in 30 Days", ["stress"], 8),
    ("https://moneymonth.example/no-spend", "30 Day Money Challenges", ["finance"], 6),
    ("https://kindlist.example/gratitude", "Gratitude Challenges", ["gratitude"], 6),
    ("https://homecooks.example/30-days-of-cooking", "30 Days of Home Cooking", ["cooking"], 7),
    ("https://www.bigideas.example/100-challenge-ideas", "100 Challenge Ideas", ["sleep", "fitness", "hydration"], 10),
    ("https://selfgrowth.example/monthly-challenges", "Monthly Challenges for Growth", ["stress", "finance", "cooking"], 8),
    ("https://borderline.example/almost-a-list", "Some Habits", ["gratitude"], 5),
    ("https://thin.example/quotes", "Motivational Quotes", [], 2),
    ("https://news.example/story", "Local News", [], 0),
    ("https://flaky.example/list", "Flaky Server", ["sleep"], None),  # judge unavailable
]

BLOCKED = [
    "https://www.youtube.com/watch?v=30daychallenge",
    "https://m.facebook.com/groups/30days",
    "https://www.pinterest.com/pin/12345",
    "https://www.amazon.com/30-day-journal/dp/B000",
    "https://old.reddit.com/r/getdisciplined/comments/abc",
    "https://www.quora.com/What-are-good-30-day-challenges",
]

# Lookalikes that must survive the blocklist.
LOOKALIKES = [
    ("https://notamazon.example/30-day-ideas", "Not Amazon Ideas", ["study"], 4),
    ("https://youtube.com.mirror.example/challenges", "Mirror", ["finance"], 3),
]

MISSING_PAGE = "https://gone.example/removed"
EMPTY_PAGE = "https://blank.example/empty"


def stable_hash(text):
    h = 2166136261
    for b in text.encode():
        h = ((h ^ b) * 16777619) & 0xFFFFFFFF
    return h


def canonical(action):
    """Maps paraphrases and shouted copies onto the original daily action."""
    for theme, i, (_, _, para) in PARAPHRASES:
        if action == para:
            return THEMES[theme][i][2]
    for rows in THEMES.values():
        for _, _, a in rows:
            if action.lower().rstrip("!") == a.lower():
                return a
    return action


def canonical_set(actions):
    return {canonical(a) for a in actions}


def item(title, wish, action):
    return {"title": title, "description": f"{title}: {action.lower()}.", "wish": wish, "daily_action": action}


def html_for(title, entries):
    lis = "".join(f"<li><h3>{t}</h3><p>{a}</p></li>" for t, _, a in entries)
    return (f"<html><head><title>{title}</title><style>body{{}}</style></head>"
            f"<body><nav>Home | About</nav><script>var x=1;</script>"
            f"<h1>{title}</h1><p>Try one of these for thirty days.</p><ul>{lis}</ul>"
            f"<footer>Copyright</footer></body></html>")


def main():
    pages = PAGES + LOOKALIKES
    extractions = {}
    html = {}
    scores = {}
    unavailable = []
    for idx, (url, title, themes, score) in enumerate(pages):
        entries = []
        for theme in themes:
            rows = THEMES[theme]
            if len(themes) > 1:
                rows = rows[:2]  # roundup pages repeat the top entries verbatim
            entries.extend(rows)
        if url == "https://selfgrowth.example/monthly-challenges":
            entries = [(t, w, a.upper() + "!") if i == 0 else (t, w, a) for i, (t, w, a) in enumerate(entries)]
        if url == "https://www.bigideas.example/100-challenge-ideas":
            entries += [p for _, _, p in PARAPHRASES[:3]] + [n for _, n in DISTINCT_NEIGHBOURS]
        if url == "https://selfgrowth.example/monthly-challenges":
            entries += [p for _, _, p in PARAPHRASES[3:]]
        html[url] = html_for(title, entries) if entries else html_for(title, []).replace("<ul></ul>", "<p>Nothing here.</p>")
        extractions[url] = [item(*e) for e in entries]
        if score is None:
            unavailable.append(url)
        else:
            scores[url] = score
    html[EMPTY_PAGE] = "<html><head><title>x</title></head><body><script>1</script></body></html>"
    scores[EMPTY_PAGE] = 9
    for u in BLOCKED:
        scores[u] = 10  # would be kept if the blocklist let it through
        html[u] = html_for("Blocked", THEMES["sleep"][:1])

    duplicates = []
    for theme, i, (_, _, action) in PARAPHRASES:
        duplicates.append([THEMES[theme][i][2], action, True])
    for theme, (_, _, action) in DISTINCT_NEIGHBOURS:
        for _, _, other in THEMES[theme]:
            duplicates.append([other, action, False])

    # The mock judge rejects most irrelevant candidates during validation and
    # keeps every relevant one.
    all_actions = sorted({i["daily_action"] for items in extractions.values() for i in items})
    relevance = []
    for _, text, _, relevant in QUERIES:
        keep = canonical_set(relevant)
        for action in all_actions:
            ok = canonical(action) in keep
            if not ok and stable_hash(text + "|" + action) % 10 < 8:
                relevance.append([text, action, False])

    table = {
        "page_scores": scores,
        "default_score": 0,
        "extractions": extractions,
        "duplicates": duplicates,
        "default_duplicate": False,
        "relevance": relevance,
        "default_relevant": True,
        "unavailable": unavailable,
    }

    serp_a, serp_b = [], []
    for n, (url, title, _, _) in enumerate(pages):
        rec = {"query_id": f"q{n % 11 + 1:02d}", "url": url, "title": title, "snippet": f"{title} for a month"}
        (serp_a if n % 2 == 0 else serp_b).append(rec)
    # the same pages surfacing again under other queries, spelled differently
    serp_b.append({"query_id": "q12", "url": "HTTPS://WWW.HABITLAB.EXAMPLE/30-day-sleep-challenges/", "title": "dup", "snippet": "dup"})
    serp_a.append({"query_id": "q13", "url": "https://fitfolks.example/blog/monthly-fitness-challenge?utm_source=x#top", "title": "dup", "snippet": "dup"})
    for n, u in enumerate(BLOCKED):
        (serp_a if n % 2 else serp_b).append({"query_id": f"q{n + 14:02d}", "url": u, "title": "blocked", "snippet": "30 day challenge"})
    serp_a.append({"query_id": "q20", "url": MISSING_PAGE, "title": "Gone", "snippet": "404"})
    serp_b.append({"query_id": "q21", "url": EMPTY_PAGE, "title": "Empty", "snippet": "nothing"})
    serp_b.append({"query_id": "q22", "url": "not a url at all", "title": "bad", "snippet": "bad"})

    (HERE / "serp").mkdir(exist_ok=True)
    for name, rows in (("serp/batch_a.jsonl", serp_a), ("serp/batch_b.jsonl", serp_b)):
        (HERE / name).write_text("".join(json.dumps(r) + "\n" for r in rows))
    (HERE / "pages.jsonl").write_text("".join(json.dumps({"url": u, "html": h}) + "\n" for u, h in html.items()))
    (HERE / "mock_table.json").write_text(json.dumps(table, indent=1, sort_keys=True) + "\n")


def label_queries(work_dir):
    """Writes queries.jsonl using the ids assigned in work_dir/challenges_dedup.jsonl."""
    rows = [json.loads(l) for l in (pathlib.Path(work_dir) / "challenges_dedup.jsonl").read_text().splitlines()]
    out = []
    for qid, text, tier, relevant in QUERIES:
        keep = canonical_set(relevant)
        ids = sorted(r["id"] for r in rows if canonical(r["daily_action"]) in keep)
        out.append({"id": qid, "text": text, "tier": tier, "relevant_ids": ids})
    (HERE / "queries.jsonl").write_text("".join(json.dumps(r) + "\n" for r in out))


if __name__ == "__main__":
    import sys
    if len(sys.argv) == 3 and sys.argv[1] == "--label":
        label_queries(sys.argv[2])
    else:
        main()
