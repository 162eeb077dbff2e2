#!/usr/bin/env python3
# Copyright 2026 The NGDS Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates the bundled task corpus (data/corpus.json).

Each family is a string transformation applied to randomly drawn inputs.
Output is deterministic for a given --seed.
"""

import argparse
import json
import random

FIRST = ["Yann", "Hugo", "Tara", "Yoshua", "Alice", "Bob", "Carol", "Dmitri", "Elena", "Farid",
         "Grace", "Hiro", "Ines", "Jonas", "Kemal", "Lena", "Marco", "Nadia", "Oscar", "Priya",
         "Quinn", "Rosa", "Samir", "Tomas", "Ulla", "Victor", "Wanda", "Xavier", "Yusuf", "Zoe"]
LAST = ["LeCunn", "Larochelle", "Sainath", "Bengio", "Smith", "Jones", "Nguyen", "Garcia",
        "Okafor", "Petrov", "Tanaka", "Muller", "Rossi", "Silva", "Kowalski", "Haddad",
        "Johansson", "Novak", "Fischer", "Moreau", "Brown", "Kim", "Lopez", "Schmidt"]
CITY = ["Springfield", "Riverside", "Fairview", "Madison", "Georgetown", "Salem", "Clinton",
        "Greenville", "Bristol", "Oakland", "Dayton", "Auburn"]
STATE = ["IL", "CA", "NY", "TX", "WA", "OR", "MA", "GA", "OH", "MI"]
STREET = ["Main St", "Oak Ave", "Pine Rd", "Maple Dr", "Cedar Ln", "Elm St", "Park Blvd"]
DOMAIN = ["iclr.org", "example.com", "mail.net", "corp.io", "uni.edu"]
EXT = ["txt", "csv", "json", "png", "pdf", "md"]
WORDS = ["alpha", "beta", "gamma", "delta", "omega", "sigma", "kappa", "theta", "lambda"]
MONTHS = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"]


def digits(r, n):
    return "".join(r.choice("0123456789") for _ in range(n))


def name(r):
    return r.choice(FIRST), r.choice(LAST)


def coord(r):
    return f"{r.randint(-99, 99)}.{digits(r, r.randint(5, 11))}"


# Each family returns (draw, transform): draw(r) -> list of inputs,
# transform(inputs) -> output.
def families():
    f = {}

    def add(fid, draw, fn):
        f[fid] = (draw, fn)

    one_name = lambda r: [" ".join(name(r))]
    add("initial-last", one_name, lambda i: i[0][0] + " " + i[0].split(" ")[1])
    add("last-comma-first", one_name, lambda i: i[0].split(" ")[1] + ", " + i[0].split(" ")[0])
    add("initials-dotted", one_name, lambda i: i[0][0] + "." + i[0].split(" ")[1][0] + ".")
    add("initials", one_name, lambda i: i[0][0] + i[0].split(" ")[1][0])
    add("first-name", one_name, lambda i: i[0].split(" ")[0])
    add("last-name", one_name, lambda i: i[0].split(" ")[1])
    add("first-initial-dot", one_name, lambda i: i[0].split(" ")[0] + " " + i[0].split(" ")[1][0] + ".")
    add("last-first-initial", one_name, lambda i: i[0].split(" ")[1] + " " + i[0][0])
    add("name-two-cols", lambda r: list(name(r)), lambda i: i[1] + ", " + i[0])
    add("name-two-cols-initial", lambda r: list(name(r)), lambda i: i[0][0] + ". " + i[1])
    add("comma-name-swap", lambda r: [", ".join(reversed(name(r)))],
        lambda i: i[0].split(", ")[1] + " " + i[0].split(", ")[0])

    def phone(r):
        return digits(r, 3), digits(r, 3), digits(r, 4)

    add("phone-paren-to-dash", lambda r: ["({}) {}{}".format(*phone(r))],
        lambda i: i[0][1:4] + "-" + i[0][6:9] + "-" + i[0][9:])
    add("phone-dots-to-paren", lambda r: ["{}.{}.{}".format(*phone(r))],
        lambda i: "(" + i[0][0:3] + ") " + i[0][4:7] + "-" + i[0][8:])
    add("phone-area", lambda r: ["({}) {}-{}".format(*phone(r))], lambda i: i[0][1:4])
    add("phone-dash-to-dots", lambda r: ["{}-{}-{}".format(*phone(r))],
        lambda i: i[0].replace("-", "."))
    add("phone-last4", lambda r: ["+1 {}-{}-{}".format(*phone(r))], lambda i: i[0][-4:])
    add("phone-local", lambda r: ["{}-{}-{}".format(*phone(r))], lambda i: i[0][4:])

    add("email-make", lambda r: [r.choice(FIRST).lower()], None)
    add("email-user", lambda r: [r.choice(FIRST).lower() + "@" + r.choice(DOMAIN)],
        lambda i: i[0].split("@")[0])
    add("email-domain", lambda r: [r.choice(FIRST).lower() + "@" + r.choice(DOMAIN)],
        lambda i: i[0].split("@")[1])
    add("email-from-name", lambda r: [" ".join(name(r)).lower()],
        lambda i: i[0].split(" ")[0] + "." + i[0].split(" ")[1] + "@corp.io")
    add("email-tld", lambda r: [r.choice(FIRST).lower() + "@" + r.choice(DOMAIN)],
        lambda i: i[0].split(".")[-1])

    def address(r):
        return "{} {}, {}, {} {}".format(r.randint(1, 9999), r.choice(STREET), r.choice(CITY),
                                         r.choice(STATE), digits(r, 5))

    add("address-city", lambda r: [address(r)], lambda i: i[0].split(", ")[1])
    add("address-state", lambda r: [address(r)], lambda i: i[0].split(", ")[2][:2])
    add("address-zip", lambda r: [address(r)], lambda i: i[0][-5:])
    add("address-number", lambda r: [address(r)], lambda i: i[0].split(" ")[0])
    add("address-street", lambda r: [address(r)], lambda i: i[0].split(", ")[0])
    add("address-city-state", lambda r: [address(r)],
        lambda i: i[0].split(", ")[1] + ", " + i[0].split(", ")[2][:2])
    add("address-join", lambda r: [r.choice(CITY), r.choice(STATE)], lambda i: i[0] + ", " + i[1])

    def date(r):
        return "{:04d}-{:02d}-{:02d}".format(r.randint(1950, 2030), r.randint(1, 12), r.randint(1, 28))

    add("date-iso-to-us", lambda r: [date(r)], lambda i: i[0][5:7] + "/" + i[0][8:] + "/" + i[0][:4])
    add("date-year", lambda r: [date(r)], lambda i: i[0][:4])
    add("date-month-day", lambda r: [date(r)], lambda i: i[0][5:])
    add("date-us-to-iso", lambda r: ["{:02d}/{:02d}/{:04d}".format(r.randint(1, 12), r.randint(1, 28), r.randint(1950, 2030))],
        lambda i: i[0][6:] + "-" + i[0][:2] + "-" + i[0][3:5])
    add("date-text-day", lambda r: ["{} {}, {}".format(r.choice(MONTHS), r.randint(1, 28), r.randint(1950, 2030))],
        lambda i: i[0].split(" ")[1][:-1])
    add("date-text-month", lambda r: ["{} {}, {}".format(r.choice(MONTHS), r.randint(1, 28), r.randint(1950, 2030))],
        lambda i: i[0].split(" ")[0])
    add("time-hours", lambda r: ["{:02d}:{:02d}:{:02d}".format(r.randint(0, 23), r.randint(0, 59), r.randint(0, 59))],
        lambda i: i[0][:2])
    add("time-hm", lambda r: ["{:02d}:{:02d}:{:02d}".format(r.randint(0, 23), r.randint(0, 59), r.randint(0, 59))],
        lambda i: i[0][:5])
    add("time-pad", lambda r: ["{}h{:02d}".format(r.randint(10, 23), r.randint(0, 59))],
        lambda i: i[0].replace("h", ":"))

    add("coord-first", lambda r: [",".join(coord(r) for _ in range(4))], lambda i: i[0].split(",")[0])
    add("coord-last", lambda r: [",".join(coord(r) for _ in range(4))], lambda i: i[0].split(",")[-1])
    add("coord-pair", lambda r: [coord(r) + ", " + coord(r)], lambda i: "(" + i[0] + ")")
    add("size-arrow", lambda r: ["type size = {}: {} type size = {}: {}".format(
        r.randint(10, 99), r.choice(WORDS), r.randint(10, 99), r.choice(WORDS))],
        lambda i: i[0].split(" ")[3][:-1] + "->" + i[0].split(" ")[8][:-1])
    add("price-dollars", lambda r: ["${}.{}".format(r.randint(1, 9999), digits(r, 2))],
        lambda i: i[0][1:].split(".")[0])
    add("percent", lambda r: ["{}".format(r.randint(1, 99))], lambda i: i[0] + "%")
    add("number-units", lambda r: ["{} kg".format(r.randint(1, 999))], lambda i: i[0].split(" ")[0])

    add("path-file", lambda r: ["/home/{}/{}.{}".format(r.choice(FIRST).lower(), r.choice(WORDS), r.choice(EXT))],
        lambda i: i[0].split("/")[-1])
    add("path-ext", lambda r: ["/data/{}/{}.{}".format(r.choice(WORDS), r.choice(WORDS), r.choice(EXT))],
        lambda i: i[0].split(".")[-1])
    add("path-user", lambda r: ["/home/{}/{}.{}".format(r.choice(FIRST).lower(), r.choice(WORDS), r.choice(EXT))],
        lambda i: i[0].split("/")[2])
    add("path-stem", lambda r: ["{}_{}.{}".format(r.choice(WORDS), digits(r, 3), r.choice(EXT))],
        lambda i: i[0].split(".")[0])
    add("id-prefix", lambda r: ["{}-{}".format(r.choice(WORDS).upper(), digits(r, 4))],
        lambda i: i[0].split("-")[0])
    add("id-number", lambda r: ["{}-{}".format(r.choice(WORDS).upper(), digits(r, 4))],
        lambda i: i[0].split("-")[1])
    add("paren-content", lambda r: ["{} ({})".format(" ".join(name(r)), r.choice(STATE))],
        lambda i: i[0].split("(")[1][:-1])
    add("quote-word", lambda r: [r.choice(WORDS)], lambda i: '"' + i[0] + '"')
    add("kv-value", lambda r: ["{}: {}".format(r.choice(WORDS), r.randint(1, 9999))],
        lambda i: i[0].split(": ")[1])
    add("kv-key", lambda r: ["{}={}".format(r.choice(WORDS), r.randint(1, 9999))],
        lambda i: i[0].split("=")[0])
    add("csv-second", lambda r: [";".join(r.choice(WORDS) for _ in range(3))], lambda i: i[0].split(";")[1])
    add("words-second", lambda r: [" ".join(r.choice(WORDS) for _ in range(3))], lambda i: i[0].split(" ")[1])
    add("upper-code", lambda r: ["{}{}".format(r.choice(WORDS), r.choice(STATE))],
        lambda i: "".join(c for c in i[0] if c.isupper()))
    add("version-major", lambda r: ["v{}.{}.{}".format(r.randint(1, 30), r.randint(0, 99), r.randint(0, 99))],
        lambda i: i[0][1:].split(".")[0])
    add("version-minor", lambda r: ["v{}.{}.{}".format(r.randint(1, 30), r.randint(0, 99), r.randint(0, 99))],
        lambda i: i[0].split(".")[1])
    return f


def email_make(inputs, domain):
    return inputs[0] + "@" + domain


def build(seed, per_family):
    r = random.Random(seed)
    tasks = []
    fams = families()
    for fid in sorted(fams):
        draw, fn = fams[fid]
        for variant in range(per_family):
            if fid == "email-make":
                dom = DOMAIN[variant % len(DOMAIN)]
                fn_v = lambda i, d=dom: email_make(i, d)
            else:
                fn_v = fn
            seen = set()
            examples = []
            tries = 0
            while len(examples) < 8 and tries < 200:
                tries += 1
                inputs = draw(r)
                key = tuple(inputs)
                if key in seen:
                    continue
                seen.add(key)
                examples.append({"inputs": inputs, "output": fn_v(inputs)})
            spec_count = 1 if variant % 3 != 2 else 2
            tasks.append({"id": f"{fid}-{variant}", "examples": examples, "spec_count": spec_count})

    # Fixtures with fixed content.
    tasks.append({"id": "fixture-names", "spec_count": 3, "examples": [
        {"inputs": ["Yann LeCunn"], "output": "Y LeCunn"},
        {"inputs": ["Hugo Larochelle"], "output": "H Larochelle"},
        {"inputs": ["Tara Sainath"], "output": "T Sainath"},
        {"inputs": ["Yoshua Bengio"], "output": "Y Bengio"}]})
    tasks.append({"id": "fixture-phone", "spec_count": 1, "examples": [
        {"inputs": ["(612) 8729128"], "output": "612-872-9128"},
        {"inputs": ["(425) 7064550"], "output": "425-706-4550"}]})
    tasks.append({"id": "fixture-email", "spec_count": 2, "examples": [
        {"inputs": ["alice"], "output": "alice@iclr.org"},
        {"inputs": ["bob"], "output": "bob@iclr.org"},
        {"inputs": ["carol"], "output": "carol@iclr.org"}]})
    tasks.append({"id": "fixture-coords", "spec_count": 1, "examples": [
        {"inputs": ["41.7114830017,-91.41233825683,41.60762786865,-91.63739013671"], "output": "41.7114830017"},
        {"inputs": ["42.0538899,-87.6756287,41.8781136,-87.6297982"], "output": "42.0538899"},
        {"inputs": ["-33.8688197,151.2092955,-37.8136276,144.9630576"], "output": "-33.8688197"}]})
    tasks.append({"id": "fixture-sizes", "spec_count": 1, "examples": [
        {"inputs": ["type size =  36: Bartok.Analysis.CallGraphNode type size =  32: Bartok.Analysis.CallGraphNode CallGraphNode"], "output": "36->32"},
        {"inputs": ["type size =  48: Bartok.Analysis.Node type size =  16: Bartok.Analysis.Edge Edge"], "output": "48->16"}]})

    # Split by task: 65% train, 15% validation, 20% test.
    order = list(range(len(tasks)))
    r.shuffle(order)
    n = len(tasks)
    n_train = round(0.65 * n)
    n_val = round(0.15 * n)
    for rank, idx in enumerate(order):
        tasks[idx]["split"] = "train" if rank < n_train else ("validation" if rank < n_train + n_val else "test")
    for t in tasks:
        if t["id"].startswith("fixture-"):
            t["split"] = "test"
    tasks.sort(key=lambda t: t["id"])
    return {"tasks": tasks}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--per-family", type=int, default=4)
    ap.add_argument("--out", default="data/corpus.json")
    args = ap.parse_args()
    corpus = build(args.seed, args.per_family)
    with open(args.out, "w") as fh:
        json.dump(corpus, fh, indent=1)
        fh.write("\n")
    print(f"wrote {len(corpus['tasks'])} tasks to {args.out}")


if __name__ == "__main__":
    main()
