"""Regenerate the checked-in fixture interchange files.

Run from this directory:  python make_fixtures.py

The parses are written with plain string formatting on purpose, so the
fixtures stay independent of the package's own CoNLL-U writer.
"""
import json
from pathlib import Path

HERE = Path(__file__).parent

# segment tables: (form, head 1-based or 0 for root, deprel)
EXAMPLES = [
    {
        "id": "fx-001",
        "title": "小狐狸学艺",
        "outline": ["小狐狸", "拜师学艺", "翻山越岭", "遇到风雨",
                    "坚持练习", "学会本领", "回到森林", "帮助伙伴"],
        "sentences": [
            [("小狐狸", 2, "nsubj"), ("想", 0, "root"), ("拜师", 2, "dep"),
             ("学艺", 3, "dobj"), ("。", 2, "punct")],
            [("它", 2, "nsubj"), ("翻山越岭", 0, "root"), ("，", 2, "punct"),
             ("遇到", 2, "conj"), ("风雨", 4, "dobj"), ("。", 2, "punct")],
            [("它", 2, "nsubj"), ("坚持", 0, "root"), ("练习", 2, "dobj"),
             ("，", 2, "punct"), ("终于", 6, "advmod"), ("学会", 2, "conj"),
             ("本领", 6, "dobj"), ("。", 2, "punct")],
            [("它", 2, "nsubj"), ("回到", 0, "root"), ("森林", 2, "dobj"),
             ("，", 2, "punct"), ("帮助", 2, "conj"), ("伙伴", 5, "dobj"),
             ("。", 2, "punct")],
        ],
        "candidates": [
            "小狐狸想学好本领。它翻山越岭，遇到风雨。它天天练习，终于学会了。它回到森林，帮助伙伴。",
            None,  # replaced with the original story (duplicate, rejected)
            "小狐狸出门拜师。它翻过高山，淋了大雨。它坚持练习，学会了本领。它回到森林，帮助朋友。",
            "太短。",  # below the length floor, rejected
            "小狐狸拜师学艺。它走过山岭，遇到风雨。它不断练习，学会本领。它回到森林，帮助伙伴们。",
            "小狐狸想拜师学艺。它翻山越岭，遇到大风雨。它坚持练习，终于学会本领。它回到森林，帮助同伴。",
            "小狐狸要拜师学艺。它翻山越岭，遇到风雨。它用心练习，终于学会本领。它回森林去，帮助伙伴。",
            "小狐狸想拜师学艺。它翻山越岭，遇到风雨。它坚持练习，最终学会本领。它回到森林，帮助大家。",
        ],
    },
    {
        "id": "fx-002",
        "title": "周游世界",
        "outline": ["他们", "出发", "游历", "所有的国家", "旅程", "大家", "开心", "回家"],
        "sentences": [
            [("他们", 2, "nsubj"), ("准备", 0, "root"), ("出发", 2, "dobj"),
             ("。", 2, "punct")],
            [("他们", 2, "nsubj"), ("游历", 0, "root"), ("了", 2, "aux"),
             ("所有", 6, "det"), ("的", 6, "det"), ("国家", 2, "dobj"),
             ("，", 2, "punct"), ("旅程", 10, "nsubj"), ("很", 10, "advmod"),
             ("长", 2, "conj"), ("。", 2, "punct")],
            [("大家", 4, "nsubj"), ("都", 4, "advmod"), ("很", 4, "advmod"),
             ("开心", 0, "root"), ("。", 4, "punct")],
            [("最后", 3, "advmod"), ("他们", 3, "nsubj"), ("回家", 0, "root"),
             ("。", 3, "punct")],
        ],
        "candidates": [
            "他们准备出发。他们周游了所有的国家，旅程很长。大家都很开心。最后他们回家。",
            "他们收拾好就出发。他们游览了所有的国家，旅程不短。大家都很开心。最后他们回家了。",
            None,
            "他们准备出发。他们走遍了所有的国家，旅程很长。大家都非常开心。最后他们回到家。",
            "他们准备动身。他们游历了每个国家，旅程很长。大家都很高兴。最后他们回家。",
            "他们马上出发。他们游历了所有的国家，一路很长。大家都很开心。最后他们一起回家。",
        ],
    },
    {
        "id": "fx-003",
        "title": "勇敢的小船",
        "outline": ["小船出海", "风浪很大", "船长镇定", "调整方向",
                    "穿过风暴", "看见灯塔", "安全靠岸", "大家欢呼"],
        "sentences": [
            [("小船", 2, "nsubj"), ("出海", 0, "root"), ("了", 2, "aux"),
             ("。", 2, "punct")],
            [("风浪", 3, "nsubj"), ("很", 3, "advmod"), ("大", 0, "root"),
             ("，", 3, "punct"), ("船长", 6, "nsubj"), ("镇定", 3, "conj"),
             ("，", 3, "punct"), ("调整", 3, "conj"), ("方向", 8, "dobj"),
             ("。", 3, "punct")],
            [("小船", 2, "nsubj"), ("穿过", 0, "root"), ("风暴", 2, "dobj"),
             ("，", 2, "punct"), ("看见", 2, "conj"), ("灯塔", 5, "dobj"),
             ("。", 2, "punct")],
            [("最后", 3, "advmod"), ("安全", 3, "advmod"), ("靠岸", 0, "root"),
             ("，", 3, "punct"), ("大家", 6, "nsubj"), ("欢呼", 3, "conj"),
             ("。", 3, "punct")],
        ],
        "candidates": [
            "小船出海了。风浪很大，船长很镇定，调整了方向。小船穿过风暴，看见灯塔。最后安全靠岸，大家欢呼。",
            "小船出航了。风浪很大，船长镇定，调整方向。小船穿过风暴，看见了灯塔。最后安全靠岸，大家欢呼起来。",
            "小船出海了。风浪特别大，船长镇定，调整方向。小船穿过风暴，看见灯塔。最后安全靠岸，大家都欢呼。",
            "小船出海了。风浪很大，船长不慌，调整方向。小船穿过风暴，看见灯塔。最后平安靠岸，大家欢呼。",
            "小船出海了。风浪很大，船长镇定地调整方向。小船穿过风暴，看见灯塔。最后安全靠岸，大家欢呼。",
            "小船出海了。风浪很大，船长镇定，调好方向。小船穿过风暴，看见灯塔。最后安全靠岸，大家欢呼。",
            "小船出海了。风浪很大，船长镇定，调整方向。小船冲过风暴，看见灯塔。最后安全靠岸，大家欢呼。",
        ],
    },
]


def story_text(sentences):
    return "".join(form for sent in sentences for form, _, _ in sent)


def main():
    with open(HERE / "examples.jsonl", "w", encoding="utf-8") as fh:
        for ex in EXAMPLES:
            record = {
                "id": ex["id"],
                "title": ex["title"],
                "outline": ex["outline"],
                "story": story_text(ex["sentences"]),
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    with open(HERE / "parses.conllu", "w", encoding="utf-8") as fh:
        for ex in EXAMPLES:
            fh.write(f"# example_id = {ex['id']}\n")
            for i, sent in enumerate(ex["sentences"], 1):
                fh.write(f"# sent_id = {ex['id']}-{i}\n")
                for j, (form, head, deprel) in enumerate(sent, 1):
                    fh.write(f"{j}\t{form}\t_\t_\t_\t_\t{head}\t{deprel}\t_\t_\n")
                fh.write("\n")

    with open(HERE / "paraphrases.jsonl", "w", encoding="utf-8") as fh:
        for ex in EXAMPLES:
            original = story_text(ex["sentences"])
            candidates = [original if c is None else c for c in ex["candidates"]]
            fh.write(json.dumps(
                {"example_id": ex["id"], "candidates": candidates}, ensure_ascii=False
            ) + "\n")

    # phrases must occur verbatim for the identity-evaluation fixture
    for ex in EXAMPLES:
        story = story_text(ex["sentences"])
        for phrase in ex["outline"]:
            assert phrase in story, (ex["id"], phrase)
    print("fixtures written")


if __name__ == "__main__":
    main()
