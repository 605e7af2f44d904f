#!/usr/bin/env python3
"""Writes the 20-page directory corpus used by the corpus tests.

Run from the repository root:
    python3 tests/tools/gen_corpus_pages.py

Hand count of label subtrees after default cleaning: p01 1, p02 2, p06 1,
p09 1, p10 1, p15 1; every other page 0 (missing, duplicate, empty or
removed targets, or labels without a for attribute). Total 7.
Every title carries punctuation so no page is alphanumeric-only.
"""
import pathlib

OUT = pathlib.Path("tests/fixtures/corpus/pages")


def page(title, body, head_extra=""):
    return f"""<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>{title} | Example Homes</title>{head_extra}
</head>
<body>
{body}
</body>
</html>
"""


def filler(n):
    return "\n".join(
        f"<p>Paragraph {i}: listings, prices &amp; neighborhood notes for week {i}.</p>"
        for i in range(n))


PAGES = {
    "p01_search.html": page("Search", """<form id="f" class="search"><label for="q">Search</label><input id="q" type="text" name="q"><button type="submit">Go</button></form>"""),
    "p02_two_forms.html": page("Two forms", """<section><form id="login"><label for="user">User</label><input id="user" type="text"></form></section>
<section><form id="news"><div class="row"><label for="mail">Email</label></div><div class="row"><input id="mail" type="email"></div></form></section>"""),
    "p03_missing_target.html": page("Missing", """<form><label for="ghost">Nobody</label><input id="present" type="text"></form>"""),
    "p04_duplicate_ids.html": page("Dupes", """<form><label for="dup">Twice</label><input id="dup"><input id="dup"></form>"""),
    "p05_wrapping_label.html": page("Wrap", """<form><label>Name <input id="name" type="text"></label></form>"""),
    "p06_far_target.html": page("Far", """<div class="left"><label for="zip">Zip</label></div>
<div class="right"><span><input id="zip" type="text"></span></div>"""),
    "p07_article.html": page("Article", "<article><h1>Market report</h1>" + filler(12) + "</article>"),
    "p08_empty_for.html": page("Empty for", """<form><label for="">Empty</label><input id="" type="text"></form>"""),
    "p09_table_form.html": page("Table", """<table><tbody><tr><td><label for="beds">Beds</label></td><td><select id="beds"><option value="1">1</option><option value="2">2</option></select></td></tr></tbody></table>"""),
    "p10_scripted.html": page("Scripted", """<div id="signup"><script>track("signup");</script><label for="email" class="lbl">Email</label><input id="email" type="email" value=""></div>""", "\n<script>var x = 1;</script>"),
    "p11_list.html": page("List", "<ul>" + "".join(f"<li>Item {i}</li>" for i in range(30)) + "</ul>"),
    "p12_nav.html": page("Nav", """<nav><a href="/a">A</a> <a href="/b">B</a> <a href="/c">C</a></nav>""" + filler(3)),
    "p13_long.html": page("Long", "<main>" + filler(80) + "</main>"),
    "p14_entities.html": page("Entities", "<p>Caf&eacute; &ndash; r&eacute;sum&eacute; &copy; 2019 &lt;tags&gt;</p>"),
    "p15_settings.html": page("Settings", """<form id="prefs"><fieldset><legend>Alerts</legend><input id="alerts" type="checkbox" value="on"><label for="alerts">Email alerts</label></fieldset></form>"""),
    "p16_footer.html": page("Footer", filler(5) + "<footer><p>&copy; Example</p></footer>"),
    "p17_images.html": page("Images", "".join(f'<figure><img src="/i/{i}.jpg" alt="photo {i}"><figcaption>Photo {i}</figcaption></figure>' for i in range(6))),
    "p18_noscript_target.html": page("Noscript", """<noscript><input id="nojs" type="text"></noscript><label for="nojs">No JS</label>"""),
    "p19_table.html": page("Table data", "<table><tbody>" + "".join(f"<tr><td>{i}</td><td>{i*i}</td></tr>" for i in range(15)) + "</tbody></table>"),
    "p20_mixed.html": page("Mixed", "<div><h2>Tips</h2>" + filler(7) + "<label>No for attribute</label></div>"),
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, text in PAGES.items():
        (OUT / name).write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main()
