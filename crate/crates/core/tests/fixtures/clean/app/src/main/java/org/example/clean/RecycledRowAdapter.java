package org.example.clean;

import android.view.View;
import android.view.ViewGroup;
import android.widget.BaseAdapter;
import android.widget.TextView;

// Reuses the recycled row but looks the label up every time.
public class RecycledRowAdapter extends BaseAdapter {
    private final String[] items;
    private final android.view.LayoutInflater inflater;

    public RecycledRowAdapter(android.view.LayoutInflater inflater, String[] items) {
        this.inflater = inflater;
        this.items = items;
    }

    @Override
    public int getCount() {
        return items.length;
    }

    @Override
    public Object getItem(int position) {
        return items[position];
    }

    @Override
    public long getItemId(int position) {
        return position;
    }

    @Override
    public View getView(int position, View convertView, ViewGroup parent) {
        View row = convertView;
        if (row == null) {
            row = inflater.inflate(R.layout.row, parent, false);
        }
        TextView label = (TextView) row.findViewById(R.id.label);
        label.setText(items[position]);
        return row;
    }
}
