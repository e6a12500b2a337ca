"""Generate the committed 12-session fixture corpus under tests/fixtures.

Each session is scripted as a list of editing actions; the script is played
into CoAuthor-style JSONL events and simultaneously into a plain string so
the generator can assert that the package's replay reproduces the intended
final essay and suggestion resolutions. Run from the repo root:

    python3 tools/make_fixtures.py
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from writelab.behavior import binarize_treatments, extract_behavior_profile
from writelab.ingest import (
    Resolution,
    SessionMeta,
    load_session_log,
    reconstruct_document,
    segment_suggestion_episodes,
)

CORPUS = REPO / "tests" / "fixtures" / "corpus"


class SessionScript:
    def __init__(self, prompt: str):
        self.events: list[dict] = []
        self.text = ""
        self.ts = 0
        self._emit("system-initialize", "api", ops=[{"insert": prompt}])
        self.text = prompt

    def _tick(self) -> int:
        self.ts += 700 + (len(self.events) % 5) * 53
        return self.ts

    def _emit(self, name: str, source: str, ops=None, **extra) -> None:
        event = {
            "eventName": name,
            "eventSource": source,
            "eventTimestamp": self._tick(),
        }
        if ops is not None:
            event["textDelta"] = {"ops": ops}
        event.update(extra)
        self.events.append(event)

    @staticmethod
    def _ops(offset: int, insert: str | None = None, delete: int | None = None):
        ops = []
        if offset:
            ops.append({"retain": offset})
        if insert is not None:
            ops.append({"insert": insert})
        if delete is not None:
            ops.append({"delete": delete})
        return ops

    def type(self, text: str, at: int | None = None) -> None:
        offset = len(self.text) if at is None else at
        self._emit("text-insert", "user", ops=self._ops(offset, insert=text))
        self.text = self.text[:offset] + text + self.text[offset:]

    def delete(self, offset: int, count: int) -> None:
        self._emit("text-delete", "user", ops=self._ops(offset, delete=count))
        self.text = self.text[:offset] + self.text[offset + count :]

    def cursor(self) -> None:
        self._emit("cursor-forward", "user", currentCursor=len(self.text))

    def suggest(
        self,
        options: list[str],
        accept: int | None = None,
        edit: tuple | None = None,
    ) -> None:
        """One suggestion episode: get/open, then select + api insert when
        `accept` picks an option, then an optional user edit inside the
        inserted span, otherwise a close."""
        self._emit("suggestion-get", "user")
        self._emit(
            "suggestion-open",
            "api",
            currentSuggestions=[
                {"trimmed": opt.strip(), "original": opt, "probability": -0.4 - 0.1 * i}
                for i, opt in enumerate(options)
            ],
        )
        if accept is None:
            self._emit("suggestion-close", "user")
            return
        self._emit("suggestion-select", "user", currentSuggestionIndex=accept)
        chosen = options[accept]
        start = len(self.text)
        self._emit("text-insert", "api", ops=self._ops(start, insert=chosen))
        self.text += chosen
        if edit is not None:
            kind, rel, payload = edit
            if not 0 < rel < len(chosen):
                raise ValueError("interior edit must fall strictly inside the span")
            if kind == "insert":
                self.type(payload, at=start + rel)
            elif kind == "delete":
                if rel + payload >= len(chosen):
                    raise ValueError("interior delete must stay inside the span")
                self.delete(start + rel, payload)
            else:
                raise ValueError(f"unknown edit kind {kind!r}")

    def jsonl(self) -> str:
        return "\n".join(json.dumps(ev, ensure_ascii=True) for ev in self.events) + "\n"


def build_sessions() -> dict[str, tuple[SessionMeta, SessionScript, list[Resolution]]]:
    V = Resolution.ACCEPTED_VERBATIM
    M = Resolution.ACCEPTED_MODIFIED
    R = Resolution.REJECTED
    sessions: dict[str, tuple[SessionMeta, SessionScript, list[Resolution]]] = {}

    def add(sid, genre, topic, native, temp, fp, script, plan):
        sessions[sid] = (
            SessionMeta(
                genre=genre,
                topic=topic,
                native=native,
                temperature=temp,
                frequency_penalty=fp,
            ),
            script,
            plan,
        )

    s = SessionScript("Write a short tale about a dragon who guards a secret.\n")
    s.type("The old dragon slept on a hill of obsidian and gold. ")
    s.suggest(
        [" Every knight feared her fiery breath and her sharp claws.",
         " Nobody dared to climb the hill."],
        accept=0,
    )
    s.cursor()
    s.type(" One evening a small child climbed the hill and asked for a story.")
    s.suggest([" The dragon roared and the child ran away."], accept=None)
    s.type(" The dragon smiled and shared her secret.")
    add("s01", 1, "dragons", 1, 0.2, 0.0, s, [V, R])

    s = SessionScript("Write a short tale about a dragon who guards a secret.\n")
    s.type("A young dragon found a map in the river. ")
    s.suggest(
        [" She kept the map of the stars hidden under her wing."],
        accept=0,
        edit=("delete", 13, 13),
    )
    s.type(" Winter came early that year.")
    s.suggest([" The river froze and the map was safe."], accept=0)
    s.suggest([" A wizard arrived at the village."], accept=None)
    s.suggest([" The dragon flew to the mountains."], accept=None)
    s.type(" She guarded it all her life.")
    add("s02", 1, "dragons", 0, 0.3, 0.5, s, [M, V, R, R])

    s = SessionScript("Write a story set on a distant space station.\n")
    s.type("The station drifted past the rings of a quiet planet. ")
    s.suggest(
        [" The crew watched the parallax of the far stars every night."],
        accept=0,
        edit=("insert", 21, "slow "),
    )
    s.type(" An engineer heard a knock on the outer hull.")
    s.suggest(
        [" He opened the hatch and found a garden growing in the vacuum."],
        accept=0,
        edit=("delete", 34, 7),
    )
    s.type(" Nobody slept that night.")
    add("s03", 1, "space", 1, 0.75, 1.0, s, [M, M])

    s = SessionScript("Write a story set on a distant space station.\n")
    s.type("Mira fixed antennas on the night shift. ")
    s.suggest([" She liked the hum of the station and the cold light of the stars."], accept=0)
    s.type(" A cargo ship arrived with a crate that nobody had ordered.")
    s.suggest([" Inside the crate was a xylophone made of blue glass."], accept=0)
    s.suggest([" The captain ordered the crate destroyed."], accept=None)
    s.type(" Mira played it until dawn.")
    add("s04", 1, "space", 0, 0.9, 0.0, s, [V, V, R])

    s = SessionScript("Write a story about a town that learns to recycle.\n")
    s.type("The town dump grew taller than the chapel. ")
    s.suggest(
        [" The mayor promised a new program of sorting cans and paper."],
        accept=0,
        edit=("insert", 24, "weekly "),
    )
    s.type(" Children collected bottles after school and traded them for seeds.")
    s.type(" By summer the dump was a garden.")
    add("s05", 1, "recycling", 1, 0.2, 0.5, s, [M])

    s = SessionScript("Write a story about the first day at a new school.\n")
    s.type("Tom counted the steps to the classroom door. ")
    s.suggest([" The teacher gave him a seat by the window and a fresh notebook."], accept=0)
    s.suggest([" He missed his old friends badly."], accept=None)
    s.type(" At lunch a girl traded half a sandwich for his apple.")
    s.suggest(
        [" They talked about comic books and the maps they would draw."],
        accept=0,
        edit=("delete", 18, 6),
    )
    s.suggest([" The bell rang too soon."], accept=None)
    s.suggest(
        [" The afternoon brought a quiz he had not studied for."],
        accept=0,
        edit=("insert", 25, "surprise "),
    )
    s.suggest([" He walked home alone."], accept=None)
    s.suggest([" The hallway smelled of paint and chalk."], accept=0)
    s.suggest(
        [" His new desk wobbled on one short leg all day."],
        accept=0,
        edit=("delete", 5, 4),
    )
    s.type(" The new school felt smaller by the hour.")
    add("s06", 1, "school", 0, 0.75, 1.0, s, [V, R, M, R, M, R, V, M])

    s = SessionScript("Argue for or against mandatory recycling programs.\n")
    s.type("Mandatory recycling programs pay for themselves. ")
    s.suggest(
        [" Cities that sort waste spend less on landfills and earn money from scrap."],
        accept=0,
    )
    s.type(" Critics call the rules a burden, but the data says otherwise.")
    s.type(" The evidence favors clear rules and steady habits.")
    add("s07", 0, "recycling", 1, 0.3, 0.0, s, [V])

    s = SessionScript("Argue for or against mandatory recycling programs.\n")
    s.type("Forcing households to recycle wastes public money. ")
    s.suggest(
        [" The trucks burn fuel on half empty routes every week."],
        accept=0,
        edit=("insert", 11, "extra "),
    )
    s.type(" Voluntary programs reach the same goals at lower cost.")
    s.suggest([" Fines punish the poor hardest."], accept=None)
    s.suggest([" Sorting rules confuse most households."], accept=None)
    s.type(" A tax on packaging would work better than a mandate.")
    add("s08", 0, "recycling", 0, 0.2, 1.0, s, [M, R, R])

    s = SessionScript("Argue whether schools should start later in the morning.\n")
    s.type("Schools should start later because sleep drives learning. ")
    s.suggest([" Teen brains store new ideas during the last hours of rest."], accept=0)
    s.type(" Districts that moved the bell saw grades and moods improve.")
    s.suggest([" Attendance rose in the first year."], accept=0)
    s.suggest(
        [" Buses and sports schedules can adapt with modest planning."],
        accept=0,
        edit=("delete", 37, 12),
    )
    s.suggest([" Costs stayed flat across the district."], accept=0)
    s.suggest([" Coaches complained about darker fields."], accept=None)
    s.suggest([" Parents adjusted within a month."], accept=None)
    s.type(" The later bell is a cheap reform with a large return.")
    add("s09", 0, "school", 1, 0.9, 0.5, s, [V, V, M, V, R, R])

    s = SessionScript("Argue whether schools should start later in the morning.\n")
    s.type("A later start solves nothing on its own. ")
    s.suggest([" Students would simply stay awake longer at night."], accept=None)
    s.type(" Parents still leave for work at the same hour.")
    s.suggest([" Younger siblings need the same buses."], accept=None)
    s.type(" After school jobs and practice would end after dark.")
    s.suggest([" The real fix is less homework."], accept=None)
    s.suggest([" Sleep habits start at home."], accept=None)
    s.type(" The bell is the wrong lever to pull.")
    s.delete(len(s.text) - 9, 8)
    s.type("to blame.")
    add("s10", 0, "school", 0, 0.75, 0.0, s, [R, R, R, R])

    s = SessionScript("Write a short tale about a dragon who guards a secret.\n")
    s.type("The king sent his bravest son to the cave of the dragon. ")
    s.suggest([" The dragon offered him tea and a riddle."], accept=None)
    s.type(" The son found only a mirror and a note that said look closer.")
    s.suggest([" He smashed the mirror with his sword."], accept=None)
    s.suggest([" He read the note twice and laughed."], accept=None)
    s.type(" He returned home and told the king the treasure was a lesson.")
    add("s11", 0, "dragons", 1, 0.3, 1.0, s, [R, R, R])

    s = SessionScript("Write a story set on a distant space station.\n")
    s.type("The last cargo run of the season brought a stowaway cat. ")
    s.suggest(
        [" The crew named him Comet and fed him rations of dried fish."],
        accept=0,
    )
    s.type(" The cat patrolled the corridors like a tiny captain.")
    s.suggest([" Alarms never scared him."], accept=0)
    s.suggest([" He slept inside an empty helmet."], accept=0)
    s.suggest(
        [" The botanist sewed him a vest from a spare flight suit."],
        accept=0,
        edit=("insert", 14, "quietly "),
    )
    s.suggest(
        [" Engineers swore the old station purred along with him."],
        accept=0,
        edit=("delete", 20, 4),
    )
    s.suggest([" The captain never approved the adoption."], accept=None)
    s.type(" The station felt like a home at last.")
    add("s12", 0, "space", 0, 0.9, 0.5, s, [V, V, V, M, M, R])

    return sessions


def main() -> None:
    sessions = build_sessions()
    session_dir = CORPUS / "sessions"
    session_dir.mkdir(parents=True, exist_ok=True)

    profiles = []
    for sid in sorted(sessions):
        meta, script, plan = sessions[sid]
        path = session_dir / f"{sid}.jsonl"
        content = script.jsonl()
        if sid == "s07":
            # one file carries a blank separator line to exercise the parser
            lines = content.splitlines()
            content = "\n".join(lines[:2] + [""] + lines[2:]) + "\n"
        path.write_text(content, encoding="utf-8")

        log = load_session_log(path, meta)
        document = reconstruct_document(log)
        assert document.text == script.text, f"{sid}: replay text mismatch"
        episodes = segment_suggestion_episodes(log)
        got = [ep.resolution for ep in episodes]
        assert got == plan, f"{sid}: resolutions {got} != plan {plan}"
        covered = 0
        for span in document.spans:
            assert span.start == covered, f"{sid}: span tiling broken"
            covered = span.end
        assert covered == len(document.text), f"{sid}: spans do not cover text"
        profiles.append(extract_behavior_profile(sid, episodes))

    profiles = binarize_treatments(profiles)
    for profile in profiles:
        print(
            profile.session_id,
            "t1", profile.t1_raw, profile.t1_bin,
            "t2", profile.t2_raw, profile.t2_bin,
            "t3", profile.t3_raw, profile.t3_bin,
        )
    for name in ("t1_bin", "t2_bin", "t3_bin"):
        values = {getattr(p, name) for p in profiles if getattr(p, name) is not None}
        assert values == {0, 1}, f"{name} does not split the corpus"
    n_valid = sum(p.valid_t2t3 for p in profiles)
    assert n_valid == 10, f"expected 10 valid sessions, got {n_valid}"

    with open(CORPUS / "metadata.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["session_id", "genre", "topic", "native", "temperature", "frequency_penalty"]
        )
        for sid in sorted(sessions):
            meta = sessions[sid][0]
            writer.writerow(
                [
                    sid,
                    "creative" if meta.genre else "argumentative",
                    meta.topic,
                    "native" if meta.native else "nonnative",
                    meta.temperature,
                    meta.frequency_penalty,
                ]
            )

    config = {
        "seed": 20260814,
        "session_dir": "sessions",
        "metadata_csv": "metadata.csv",
        "output_dir": "out",
        "learner": {"kind": "ridge", "ridge_lambda": 1.0},
        "bootstrap": {"replicates": 100},
        "refutation": {"simulations": 50, "fraction": 0.8},
        "shap": {"background_size": 100, "svg": True},
        "trends": {"theta": 0.6, "min_size": 3},
        "genbit_window": 10,
        "jobs": 1,
    }
    (CORPUS / "config.json").write_text(
        json.dumps(config, indent=2) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(sessions)} sessions to {session_dir}")


if __name__ == "__main__":
    main()
