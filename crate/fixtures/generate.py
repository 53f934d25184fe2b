#!/usr/bin/env python3
"""Regenerates the timeline fixtures in this directory.

All timestamps are relative to NOW; pass `--now 2024-03-01T12:00:00Z` to the
CLI when computing metrics from these files.
"""

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

NOW = datetime(2024, 3, 1, 12, 0, 0, tzinfo=timezone.utc)
HERE = Path(__file__).parent


def iso(t):
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def status(name, i, minutes_ago, rt, fav, *, retweet=False, reply=None,
           tags=(), urls=(), images=(), mentions=()):
    s = {
        "id_str": f"{int.from_bytes(name.encode()[:3], 'big') % 10**6}{i:04d}",
        "created_at": iso(NOW - timedelta(minutes=minutes_ago)),
        "retweet_count": rt,
        "favorite_count": fav,
        "entities": {
            "hashtags": [{"text": t} for t in tags],
            "urls": [{"url": f"https://t.co/{i:x}{k}", "expanded_url": u}
                     for k, u in enumerate(urls)],
            "media": [{"media_url_https": m, "type": "photo"} for m in images],
            "user_mentions": [{"screen_name": m} for m in mentions],
        },
    }
    if retweet:
        s["retweeted_status"] = {"id_str": f"9{i:06d}"}
    if reply:
        s["in_reply_to_screen_name"] = reply
    return s


def document(user, statuses):
    statuses.sort(key=lambda s: s["created_at"], reverse=True)
    return {"user": user, "statuses": statuses}


def user(name, display, description, followers, following, total, protected=False):
    return {
        "screen_name": name,
        "name": display,
        "description": description,
        "protected": protected,
        "followers_count": followers,
        "friends_count": following,
        "statuses_count": total,
    }


def youtube():
    # 100 own tweets, newest 30 min ago, oldest exactly 50 h ago;
    # retweet h-index 6, favourite h-index 9.
    rts = [20, 15, 10, 8, 7, 6] + [i % 4 for i in range(94)]
    favs = [12] * 9 + [2] * 91
    statuses = []
    for i in range(100):
        extra = {}
        if i == 2:
            extra = dict(tags=["music"], mentions=["google"])
        elif i == 10:
            extra = dict(tags=["video", "music"], urls=["https://www.youtube.com/trends"])
        elif i == 40:
            extra = dict(images=["https://pbs.twimg.com/media/yt-banner.jpg"])
        statuses.append(status("youtube", i, 30 + 30 * i, rts[i], favs[i], **extra))
    return document(user("youtube", "YouTube", "Tune In, Watch, Share.", 1000, 100, 25000), statuses)


def generated(name, display, description, followers, following, total, n, span_hours,
              rt_scale, seed, *, mentions=(), replies=(), tags=(), urls=(), images=()):
    rng = random.Random(seed)
    statuses = []
    for i in range(n):
        minutes = int(span_hours * 60 * (i + 1) / n)
        rt = int(rng.expovariate(1 / rt_scale))
        fav = int(rng.expovariate(1 / (rt_scale * 1.5)))
        extra = {}
        if i < len(mentions):
            extra["mentions"] = [mentions[i]]
        if i < len(replies):
            extra["reply"] = replies[i]
        if i < len(tags):
            extra["tags"] = [tags[i]]
        if i < len(urls):
            extra["urls"] = [urls[i]]
        if i < len(images):
            extra["images"] = [images[i]]
        statuses.append(status(name, i, minutes, rt, fav, retweet=(i % 7 == 6), **extra))
    return document(user(name, display, description, followers, following, total), statuses)


def main():
    docs = {
        "youtube": youtube(),
        "alice": generated(
            "alice", "Alice Liddell", "Curiouser and curiouser.", 5400, 310, 8800, 60, 120, 3, 1,
            mentions=["bob", "carol", "dave", "bob"], replies=["bob", "dave"],
            tags=["linkeddata", "sparql", "linkeddata"], urls=["https://www.w3.org/TR/sparql11-query/"],
            images=["https://pbs.twimg.com/media/alice-1.jpg"],
        ),
        "bob": generated(
            "bob", "Bob", "", 850, 400, 1200, 40, 200, 1, 2,
            mentions=["youtube"], tags=["rdf"],
            urls=["https://www.w3.org/TR/sparql11-query/", "https://xmlns.com/foaf/spec/"],
        ),
        "carol": generated(
            "carol", "Carol", "Data & graphs.", 12000, 150, 4300, 80, 150, 4, 3,
            replies=["zed"], tags=["sparql"],
        ),
        "dave": generated(
            "dave", "Dave", "Breaking news, all day.", 250000, 900, 91000, 100, 90, 40, 4,
            mentions=["alice"], images=["https://pbs.twimg.com/media/dave-1.jpg",
                                        "https://pbs.twimg.com/media/dave-2.jpg"],
        ),
    }
    for name, doc in docs.items():
        (HERE / f"{name}.json").write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
