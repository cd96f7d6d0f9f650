//! Synthetic variants of each smell: different indentation, line endings,
//! names, factories, parents and surrounding code.

use greenfix_core::rules::RuleId;

pub struct Mutant {
    pub rule: RuleId,
    /// File name with the right extension for its language.
    pub name: String,
    pub text: String,
    /// Number of fixable findings the rule should report.
    pub expected: usize,
}

const INDENTS: [&str; 3] = ["  ", "    ", "\t"];

/// Renders `lines`, where each leading `>` stands for one indent unit.
fn render(lines: &[String], indent: &str, nl: &str) -> String {
    let mut out = String::new();
    for line in lines {
        let depth = line.chars().take_while(|&c| c == '>').count();
        let rest = &line[depth..];
        if !rest.is_empty() {
            out.push_str(&indent.repeat(depth));
            out.push_str(rest);
        }
        out.push_str(nl);
    }
    out
}

fn l(s: &str) -> String {
    s.to_owned()
}

fn layout(k: usize) -> (&'static str, &'static str) {
    (INDENTS[k % 3], if k % 4 == 3 { "\r\n" } else { "\n" })
}

pub fn view_holder() -> Vec<Mutant> {
    let converts = ["convertView", "row", "view"];
    let views = ["title", "subtitle", "icon", "badge"];
    (0..24)
        .map(|k| {
            let (indent, nl) = layout(k);
            let cv = converts[k % 3];
            let count = 1 + k % 4;
            let cast = k % 2 == 0;
            let class = format!("Adapter{k}");
            let mut lines = vec![
                l("package org.example;"),
                l(""),
                format!("public class {class} extends ArrayAdapter<String> {{"),
                l(">private final LayoutInflater inflater;"),
                l(""),
                format!(">{class}(Context context, LayoutInflater inflater) {{"),
                l(">>super(context, 0);"),
                l(">>this.inflater = inflater;"),
                l(">}"),
                l(""),
            ];
            if k % 5 == 0 {
                lines.push(l(">// Builds one row of the list."));
            }
            lines.extend([
                l(">@Override"),
                format!(">public View getView(int position, View {cv}, ViewGroup parent) {{"),
                format!(">>{cv} = inflater.inflate(R.layout.row_{k}, parent, false);"),
            ]);
            for v in &views[..count] {
                let ty = if *v == "icon" { "ImageView" } else { "TextView" };
                let value = if cast {
                    format!("({ty}) {cv}.findViewById(R.id.{v})")
                } else {
                    format!("{cv}.findViewById(R.id.{v})")
                };
                lines.push(format!(">>{ty} {v} = {value};"));
            }
            lines.push(format!(">>{}.setVisibility(View.VISIBLE);", views[0]));
            if k % 3 == 2 {
                lines.push(l(">>notifyDataSetChanged();"));
            }
            lines.extend([format!(">>return {cv};"), l(">}"), l("}")]);
            Mutant { rule: RuleId::ViewHolder, name: format!("{class}.java"), text: render(&lines, indent, nl), expected: 1 }
        })
        .collect()
}

pub fn draw_allocation() -> Vec<Mutant> {
    let allocs = [
        ("Paint p = new Paint();", "canvas.drawLine(0, 0, SIZE, SIZE, p);"),
        ("Paint paint = new Paint(Paint.ANTI_ALIAS_FLAG);", "canvas.drawCircle(5f, 5f, 2f, paint);"),
        ("Rect r = new Rect(0, 0, SIZE, SIZE);", "canvas.clipRect(r);"),
        ("RectF bounds = new RectF(0f, 0f, SIZE * 2, SIZE / 2);", "canvas.clipRect(bounds);"),
        ("Integer i = new Integer(5);", "String label = i.toString();"),
        ("Matrix m = new Matrix();", "canvas.concat(m);"),
        ("final Path path = new Path();", "canvas.clipPath(path);"),
    ];
    (0..24)
        .map(|k| {
            let (indent, nl) = layout(k);
            let class = format!("Gauge{k}");
            let (decl, use_) = allocs[k % allocs.len()];
            let mut lines = vec![
                l("package org.example;"),
                l(""),
                format!("public class {class} extends View {{"),
                l(">private static final int SIZE = 10;"),
                l(""),
                format!(">public {class}(Context context) {{"),
                l(">>super(context);"),
                l(">}"),
                l(""),
            ];
            if k % 5 == 0 {
                lines.push(l(">/** Paints the gauge. */"));
            }
            lines.extend([l(">@Override"), l(">protected void onDraw(Canvas canvas) {"), l(">>super.onDraw(canvas);")]);
            lines.push(format!(">>{decl}"));
            let mut expected = 1;
            if k % 4 == 1 {
                let (d2, u2) = allocs[(k + 3) % allocs.len()];
                lines.push(format!(">>{d2}"));
                lines.push(format!(">>{u2}"));
                expected = 2;
            }
            lines.push(format!(">>{use_}"));
            if k % 3 == 0 {
                lines.push(l(">>invalidate();"));
            }
            lines.extend([l(">}"), l("}")]);
            Mutant { rule: RuleId::DrawAllocation, name: format!("{class}.java"), text: render(&lines, indent, nl), expected }
        })
        .collect()
}

pub fn wake_lock() -> Vec<Mutant> {
    let fields = ["wl", "wakeLock", "screenLock"];
    let lifecycles = [("onCreate", "Bundle savedInstanceState", "savedInstanceState"), ("onResume", "", ""), ("onStart", "", "")];
    let parents = ["Activity", "AppCompatActivity", "FragmentActivity"];
    (0..24)
        .map(|k| {
            let (indent, nl) = layout(k);
            let class = format!("Screen{k}");
            let field = fields[k % 3];
            let (lc, params, args) = lifecycles[(k / 3) % 3];
            let receiver = if k % 2 == 1 { format!("this.{field}") } else { field.to_owned() };
            let mut lines = vec![
                l("package org.example;"),
                l(""),
                format!("public class {class} extends {} {{", parents[k % 3]),
                format!(">private PowerManager.WakeLock {field};"),
                l(""),
                l(">@Override"),
                format!(">protected void {lc}({params}) {{"),
                format!(">>super.{lc}({args});"),
                l(">>PowerManager pm = (PowerManager) getSystemService(Context.POWER_SERVICE);"),
                format!(">>{field} = pm.newWakeLock(PowerManager.PARTIAL_WAKE_LOCK, \"tag{k}\");"),
                format!(">>{receiver}.acquire();"),
                l(">}"),
            ];
            match k % 4 {
                0 => {}
                1 => lines.extend([l(""), l(">@Override"), l(">protected void onPause() {"), l(">>super.onPause();"), l(">}")]),
                2 => lines.extend([
                    l(""),
                    l(">@Override"),
                    l(">protected void onPause() {"),
                    l(">>super.onPause();"),
                    l(">>if (isFinishing()) {"),
                    l(">>>return;"),
                    l(">>}"),
                    l(">>return;"),
                    l(">}"),
                ]),
                _ => lines.extend([l(""), l(">@Override"), l(">protected void onDestroy() {"), l(">>super.onDestroy();"), l(">}")]),
            }
            lines.push(l("}"));
            Mutant { rule: RuleId::WakeLock, name: format!("{class}.java"), text: render(&lines, indent, nl), expected: 1 }
        })
        .collect()
}

pub fn recycle() -> Vec<Mutant> {
    let resources = [
        ("TypedArray a = getContext().obtainStyledAttributes(attrs, new int[] { 0 });", "int color = a.getColor(0, 0);"),
        ("final TypedArray styles = context.obtainStyledAttributes(attrs, R.styleable.Gauge, 0, 0);", "String text = styles.getString(0);"),
        ("MotionEvent ev = MotionEvent.obtain(0L, 0L, 0, 0f, 0f, 0);", "float x = ev.getX();"),
        ("VelocityTracker vt = VelocityTracker.obtain();", "vt.clear();"),
        ("Parcel parcel = Parcel.obtain();", "parcel.writeInt(1);"),
        ("Cursor c = getContext().getContentResolver().query(uri, null, null, null, null);", "int n = c.getCount();"),
    ];
    (0..24)
        .map(|k| {
            let (indent, nl) = layout(k);
            let class = format!("Styled{k}");
            let (decl, use_) = resources[k % resources.len()];
            let returns = k % 4 == 1;
            let mut lines = vec![
                l("package org.example;"),
                l(""),
                format!("public class {class} extends View {{"),
                l(">private Uri uri;"),
                l(""),
            ];
            let header = match (k / 6) % 3 {
                0 => format!(">public {class}(Context context, AttributeSet attrs) {{"),
                1 => l(">void load(Context context, AttributeSet attrs) {"),
                _ => l(">int measure(Context context, AttributeSet attrs) {"),
            };
            let returns_int = header.contains("int measure");
            lines.push(header.clone());
            if header.contains(&format!("{class}(")) {
                lines.push(l(">>super(context, attrs);"));
            }
            lines.push(format!(">>{decl}"));
            lines.push(format!(">>{use_}"));
            if k % 5 == 2 {
                lines.push(l(">>if (isInEditMode()) {"));
                lines.push(l(">>>invalidate();"));
                lines.push(l(">>}"));
            }
            if returns_int {
                lines.push(l(">>return 0;"));
            } else if returns {
                lines.push(l(">>return;"));
            }
            lines.extend([l(">}"), l("}")]);
            Mutant { rule: RuleId::Recycle, name: format!("{class}.java"), text: render(&lines, indent, nl), expected: 1 }
        })
        .collect()
}

pub fn obsolete_layout_param() -> Vec<Mutant> {
    let cases = [
        ("LinearLayout", "android:layout_alignParentBottom=\"true\""),
        ("LinearLayout", "android:layout_below=\"@id/header\""),
        ("LinearLayout", "android:layout_centerInParent=\"true\""),
        ("FrameLayout", "android:layout_weight=\"1\""),
        ("FrameLayout", "android:layout_toRightOf=\"@id/header\""),
        ("RelativeLayout", "android:layout_weight=\"1\""),
        ("RelativeLayout", "android:layout_span=\"2\""),
        ("ScrollView", "android:layout_weight=\"1\""),
        ("TableRow", "android:layout_alignParentTop=\"true\""),
        ("AbsoluteLayout", "android:layout_gravity=\"center\""),
        ("android.widget.LinearLayout", "android:layout_row=\"0\""),
        ("GridLayout", "android:layout_weight=\"1\""),
    ];
    (0..24)
        .map(|k| {
            let (indent, nl) = layout(k);
            let (parent, bad) = cases[k % cases.len()];
            let mut lines = vec![
                l("<?xml version=\"1.0\" encoding=\"utf-8\"?>"),
                format!("<{parent} xmlns:android=\"http://schemas.android.com/apk/res/android\""),
                l(">android:layout_width=\"match_parent\""),
                l(">android:layout_height=\"match_parent\">"),
                l(""),
            ];
            if k % 3 == 0 {
                lines.push(l("><!-- the only row -->"));
            }
            match (k / 2) % 4 {
                0 => lines.extend([
                    l("><TextView"),
                    l(">>android:id=\"@+id/label\""),
                    format!(">>{bad}"),
                    l(">>android:layout_width=\"wrap_content\""),
                    l(">>android:layout_height=\"wrap_content\" />"),
                ]),
                1 => lines.extend([
                    l("><TextView"),
                    l(">>android:layout_width=\"wrap_content\""),
                    l(">>android:layout_height=\"wrap_content\""),
                    format!(">>{bad} />"),
                ]),
                2 => lines.push(format!(
                    "><TextView android:id=\"@+id/label\" {bad} android:layout_width=\"wrap_content\" android:layout_height=\"wrap_content\"/>"
                )),
                _ => lines.extend([
                    l("><Button"),
                    l(">>android:text=\"@string/ok\""),
                    format!(">>{bad}"),
                    l(">>android:layout_width=\"wrap_content\""),
                    l(">>android:layout_height=\"wrap_content\">"),
                    l("></Button>"),
                ]),
            }
            lines.push(format!("</{parent}>"));
            Mutant {
                rule: RuleId::ObsoleteLayoutParam,
                name: format!("mutant_{k}.xml"),
                text: render(&lines, indent, nl),
                expected: 1,
            }
        })
        .collect()
}

pub fn all() -> Vec<Mutant> {
    let mut out = view_holder();
    out.extend(draw_allocation());
    out.extend(wake_lock());
    out.extend(recycle());
    out.extend(obsolete_layout_param());
    out
}
