package org.example.clean;

import android.app.Activity;
import android.os.Bundle;
import android.view.View;
import java.util.ArrayList;
import java.util.List;
import java.util.Map;

/**
 * Plain activity code with lambdas, generics, anonymous classes, enums and
 * switch statements.
 */
public class SettingsActivity extends Activity {
    enum Mode { LIGHT, DARK }

    private final List<Runnable> pending = new ArrayList<>();
    private Mode mode = Mode.LIGHT;

    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.settings);
        findViewById(R.id.toggle).setOnClickListener(new View.OnClickListener() {
            @Override
            public void onClick(View v) {
                toggle();
            }
        });
        pending.add(() -> setTitle(label(mode)));
    }

    @Override
    protected void onPause() {
        super.onPause();
        pending.forEach(Runnable::run);
        pending.clear();
    }

    private void toggle() {
        switch (mode) {
            case LIGHT:
                mode = Mode.DARK;
                break;
            default:
                mode = Mode.LIGHT;
        }
    }

    static <K, V extends Comparable<V>> K best(Map<K, V> scores) {
        K best = null;
        V top = null;
        for (Map.Entry<K, V> e : scores.entrySet()) {
            if (top == null || e.getValue().compareTo(top) > 0) {
                best = e.getKey();
                top = e.getValue();
            }
        }
        return best;
    }

    private static String label(Mode m) {
        return m == Mode.DARK ? "Dark" : "Light";
    }
}
