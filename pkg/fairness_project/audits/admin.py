from django.contrib import admin

from .models import AuditRun


@admin.register(AuditRun)
class AuditRunAdmin(admin.ModelAdmin):
    list_display = ('run_id', 'command', 'subject', 'exit_status', 'inputs_digest', 'created_at')
    list_filter = ('command', 'exit_status')
    search_fields = ('subject', 'inputs_digest')
    readonly_fields = ('run_id', 'inputs_digest', 'report', 'created_at', 'updated_at')
    ordering = ('-created_at',)
